// banded.hpp - Hermitian band matrices and inertia by LDL^dagger factorization
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "error.hpp"
#include "linalg.hpp"

namespace halfline {

/// Lower band storage: entry (i, j) with 0 <= i - j <= bandwidth.
class BandedHermitian {
 public:
  BandedHermitian() = default;
  BandedHermitian(int size, int bandwidth)
      : size_(size), bw_(bandwidth), data_(static_cast<std::size_t>(size) * (bandwidth + 1)) {}

  int size() const { return size_; }
  int bandwidth() const { return bw_; }

  /// Adds v at (i, j) and conj(v) at (j, i).
  void add(int i, int j, cplx v) {
    if (i < j) {
      std::swap(i, j);
      v = std::conj(v);
    }
    if (i == j) v = cplx(v.real(), 0.0);
    ref(i, j) += v;
  }

  cplx operator()(int i, int j) const {
    if (i < j) return std::conj((*this)(j, i));
    if (i - j > bw_) return 0.0;
    return data_[index(i, j)];
  }

  /// this + alpha * other
  BandedHermitian combined(double alpha, const BandedHermitian& other) const {
    BandedHermitian out(size_, std::max(bw_, other.bw_));
    for (int i = 0; i < size_; ++i)
      for (int j = std::max(0, i - out.bw_); j <= i; ++j)
        out.ref(i, j) = (*this)(i, j) + alpha * other(i, j);
    return out;
  }

  CMatrix to_dense() const {
    CMatrix m = CMatrix::Zero(size_, size_);
    for (int i = 0; i < size_; ++i)
      for (int j = std::max(0, i - bw_); j <= i; ++j) {
        m(i, j) = (*this)(i, j);
        m(j, i) = std::conj(m(i, j));
      }
    return m;
  }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * (bw_ + 1) + static_cast<std::size_t>(i - j);
  }
  cplx& ref(int i, int j) { return data_[index(i, j)]; }

  int size_ = 0;
  int bw_ = 0;
  std::vector<cplx> data_;
};

struct Inertia {
  int negative = 0;
  int zero = 0;
  int positive = 0;
};

/// Inertia of a Hermitian band matrix from the signs of D in A = L D L^dagger (Sylvester).
/// No pivoting keeps the band intact; an exactly vanishing pivot is counted as zero and
/// replaced by a tiny positive value so the factorization can continue.
inline Inertia inertia(const BandedHermitian& a) {
  const int n = a.size();
  const int bw = a.bandwidth();
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
  const double tiny = std::max(scale, 1e-300) * 1e-15;

  // l(i, j) for 0 <= i - j <= bw, with l(j, j) holding d_j
  std::vector<cplx> l(static_cast<std::size_t>(n) * (bw + 1));
  const auto at = [&](int i, int j) -> cplx& {
    return l[static_cast<std::size_t>(i) * (bw + 1) + static_cast<std::size_t>(i - j)];
  };
  std::vector<double> d(n);
  Inertia in;
  for (int j = 0; j < n; ++j) {
    const int lo = std::max(0, j - bw);
    double dj = a(j, j).real();
    for (int k = lo; k < j; ++k) dj -= std::norm(at(j, k)) * d[k];
    if (std::abs(dj) <= tiny) {
      ++in.zero;
      dj = tiny;
    } else if (dj < 0.0) {
      ++in.negative;
    } else {
      ++in.positive;
    }
    d[j] = dj;
    const int hi = std::min(n - 1, j + bw);
    for (int i = j + 1; i <= hi; ++i) {
      cplx s = a(i, j);
      for (int k = std::max(lo, i - bw); k < j; ++k) s -= at(i, k) * std::conj(at(j, k)) * d[k];
      at(i, j) = s / dj;
    }
  }
  return in;
}

}  // namespace halfline
