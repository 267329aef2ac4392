// harness.hpp - randomized verification of the count bound and the zero-potential demos
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "bound.hpp"
#include "boundary.hpp"
#include "bs_operator.hpp"
#include "fd_oracle.hpp"
#include "instance.hpp"
#include "io.hpp"
#include "potential.hpp"

namespace halfline {

/// Deterministic per-trial generator, independent of scheduling.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

struct RandomPotentialOptions {
  double support_start_min = 0.1;
  double support_start_max = 8.0;
  double length_min = 0.5;
  double length_max = 2.0;
  double strength_min = 0.5;
  double strength_max = 3.0;
};

/// V(x) = -W^dagger W bump(x) with W a random complex matrix: negative semidefinite and
/// compactly supported in (0, 10].
inline MatrixPotential random_negative_potential(int n, std::mt19937_64& rng,
                                                 const RandomPotentialOptions& o = {}) {
  std::uniform_real_distribution<double> start(o.support_start_min, o.support_start_max);
  std::uniform_real_distribution<double> length(o.length_min, o.length_max);
  std::uniform_real_distribution<double> strength(o.strength_min, o.strength_max);
  const double s = strength(rng);
  const CMatrix w = random_gaussian_matrix(n, n, rng) * (s / std::sqrt(2.0 * n));
  const double a = start(rng);
  const double b = std::min(a + length(rng), 10.0);
  CMatrix c = -(w.adjoint() * w);
  c = 0.5 * (c + c.adjoint()).eval();
  return MatrixPotential::bump(c, a, b);
}

inline Instance random_instance(int n, std::mt19937_64& rng, const RandomPotentialOptions& o = {}) {
  BoundaryPair pair = pair_from_unitary(random_unitary(n, rng));
  MatrixPotential v = random_negative_potential(n, rng, o);
  return Instance{std::move(pair), std::move(v), InstanceOptions{}, {}};
}

struct VerifyOptions {
  int trials = 200;
  int n_max = 4;
  std::uint64_t seed = 1;
  double energy = -0.5;           ///< energy of the cross-oracle comparison
  double bs_nodes_per_unit = 200.0;
  std::vector<Instance> injected;  ///< replace the first trials, in order
  int threads = 0;                 ///< 0: hardware concurrency
};

struct TrialRow {
  int trial = 0;
  int n = 0;
  double bound_total = 0.0;
  int fd_count = 0;
  bool fd_converged = false;
  int fd_below = 0;
  std::optional<int> bs_count;
  std::string bs_status = "ok";
  bool ok = true;
};

struct Violation {
  int trial = 0;
  std::string kind;  ///< "bound" or "cross_oracle"
  std::string detail;
  io::json instance;
};

struct VerifyReport {
  int trials = 0;
  std::vector<Violation> violations;
  std::vector<TrialRow> rows;
  double elapsed_seconds = 0.0;  ///< not serialized: reports must be byte-identical per seed
};

/// Count bound dominates the counted eigenvalues, with room for quadrature error.
inline bool dominated(int count, double total) { return count <= total * (1.0 + 1e-8) + 1e-12; }

inline TrialRow run_trial(const Instance& inst, int index, const VerifyOptions& opts,
                          std::vector<Violation>& violations) {
  TrialRow row;
  row.trial = index;
  row.n = inst.pair.n();
  const BoundResult bound = bargmann_bound(inst.pair, inst.potential, inst.options.eps_class);
  row.bound_total = bound.total;

  LadderOptions ladder;
  ladder.rungs = inst.options.ladder;
  ladder.with_eigenvalues = false;
  const CountReport fd = converge_count(inst.pair, inst.potential, ladder);
  row.fd_count = fd.count;
  row.fd_converged = fd.converged;
  row.fd_below = count_negative(inst.pair, inst.potential, final_rung(fd), opts.energy, false).count;

  const int nodes = inst.options.nodes > 0 ? inst.options.nodes
                                           : default_bs_nodes(inst.potential, opts.bs_nodes_per_unit);
  try {
    row.bs_count = bs_analyze(inst.pair, inst.potential, opts.energy, nodes).count;
  } catch (const Error& e) {
    row.bs_status = std::string(to_string(e.kind()));
  }

  if (!dominated(row.fd_count, row.bound_total)) {
    row.ok = false;
    violations.push_back({index, "bound",
                          "fd count " + std::to_string(row.fd_count) + " exceeds bound " +
                              std::to_string(row.bound_total),
                          io::instance_to_json(inst)});
  }
  if (row.bs_count && *row.bs_count != row.fd_below) {
    row.ok = false;
    violations.push_back({index, "cross_oracle",
                          "bs count " + std::to_string(*row.bs_count) + " != fd count " +
                              std::to_string(row.fd_below) + " below E",
                          io::instance_to_json(inst)});
  }
  return row;
}

inline Instance verify_instance(const VerifyOptions& opts, int trial) {
  if (trial < static_cast<int>(opts.injected.size())) return opts.injected[trial];
  auto rng = trial_rng(opts.seed, static_cast<std::uint64_t>(trial));
  std::uniform_int_distribution<int> dim(1, opts.n_max);
  const int n = dim(rng);
  return random_instance(n, rng);
}

inline VerifyReport run_verify(const VerifyOptions& opts) {
  if (opts.trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
  if (opts.n_max < 1 || opts.n_max > 4) throw Error(ErrorKind::InvalidArgument, "n_max must be in 1..4");
  const auto t0 = std::chrono::steady_clock::now();

  VerifyReport report;
  report.trials = opts.trials;
  report.rows.resize(opts.trials);
  std::vector<std::vector<Violation>> found(opts.trials);
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int t = next++; t < opts.trials; t = next++) {
      const Instance inst = verify_instance(opts, t);
      report.rows[t] = run_trial(inst, t, opts, found[t]);
    }
  };
  const int threads = std::max(1, std::min(opts.trials, opts.threads > 0 ? opts.threads
                                                         : static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (auto& v : found)
    for (auto& x : v) report.violations.push_back(std::move(x));
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

inline io::json verify_to_json(const VerifyReport& r, const VerifyOptions& opts) {
  io::json rows = io::json::array();
  for (const auto& row : r.rows) {
    rows.push_back(io::json{{"trial", row.trial},
                            {"n", row.n},
                            {"bound_total", row.bound_total},
                            {"fd_count", row.fd_count},
                            {"fd_converged", row.fd_converged},
                            {"fd_below_E", row.fd_below},
                            {"bs_count", row.bs_count ? io::json(*row.bs_count) : io::json(nullptr)},
                            {"bs_status", row.bs_status},
                            {"margin", row.bound_total - row.fd_count},
                            {"ok", row.ok}});
  }
  io::json violations = io::json::array();
  for (const auto& v : r.violations)
    violations.push_back(io::json{{"trial", v.trial}, {"kind", v.kind}, {"detail", v.detail}, {"instance", v.instance}});
  return io::json{{"trials", r.trials}, {"n_max", opts.n_max}, {"seed", opts.seed}, {"E", opts.energy},
                  {"violations", violations}, {"rows", rows}};
}

struct RobinRow {
  double theta = 0.0;
  int count = 0;
  double eigenvalue = 0.0;
  double expected = 0.0;  ///< -cot^2 theta
  double bound_total = 0.0;
};

struct WeakWellRow {
  double lambda = 0.0;
  int neumann_count = 0;
  double neumann_eigenvalue = 0.0;
  double neumann_bound = 0.0;
  int dirichlet_count = 0;
  double dirichlet_bound = 0.0;
  double length = 0.0;
};

struct RemarkReport {
  std::vector<RobinRow> robin;
  std::vector<WeakWellRow> wells;
  bool ok = true;
};

/// (a) binding Robin angles with V = 0 each hold one eigenvalue -cot^2 theta;
/// (b) a Neumann channel binds under arbitrarily weak attraction, a Dirichlet one does not.
inline RemarkReport run_remark_demo() {
  RemarkReport rep;
  for (double theta : {pi / 8.0, pi / 4.0, 3.0 * pi / 8.0}) {
    const BoundaryPair pair = diagonal_pair({theta});
    const MatrixPotential v = MatrixPotential::zero(1);
    const CountReport fd = converge_count(pair, v);
    RobinRow row;
    row.theta = theta;
    row.count = fd.count;
    row.eigenvalue = fd.eigenvalues.empty() ? 0.0 : fd.eigenvalues.front();
    const double cot = 1.0 / std::tan(theta);
    row.expected = -cot * cot;
    row.bound_total = bargmann_bound(pair, v).total;
    rep.ok = rep.ok && row.count == 1 && std::abs(row.eigenvalue - row.expected) < 1e-3;
    rep.robin.push_back(row);
  }
  for (double lambda : {0.01, 0.1, 1.0}) {
    const CMatrix depth = CMatrix::Constant(1, 1, -lambda);
    const MatrixPotential v = MatrixPotential::square_well(depth, 1.0, 2.0);
    // weak coupling: kappa ~ int |V|, so the bound state decays over ~1/int|V|
    const double kappa = faddeev_moment(v).l1;
    LadderOptions ladder;
    ladder.min_length = std::max(40.0, std::ceil(10.0 / kappa - 1e-9));
    WeakWellRow row;
    row.lambda = lambda;
    row.length = ladder.min_length;
    const BoundaryPair neumann = diagonal_pair({pi / 2.0});
    const CountReport n = converge_count(neumann, v, ladder);
    row.neumann_count = n.count;
    row.neumann_eigenvalue = n.eigenvalues.empty() ? 0.0 : n.eigenvalues.front();
    row.neumann_bound = bargmann_bound(neumann, v).total;
    const BoundaryPair dirichlet = diagonal_pair({pi});
    row.dirichlet_count = converge_count(dirichlet, v, ladder).count;
    row.dirichlet_bound = bargmann_bound(dirichlet, v).total;
    rep.ok = rep.ok && row.neumann_count >= 1 && dominated(row.neumann_count, row.neumann_bound) &&
             dominated(row.dirichlet_count, row.dirichlet_bound);
    rep.wells.push_back(row);
  }
  return rep;
}

inline io::json remark_to_json(const RemarkReport& r) {
  io::json robin = io::json::array();
  for (const auto& x : r.robin)
    robin.push_back(io::json{{"theta", io::round15(x.theta)}, {"count", x.count}, {"eigenvalue", x.eigenvalue},
                             {"expected", x.expected}, {"bound_total", x.bound_total}});
  io::json wells = io::json::array();
  for (const auto& x : r.wells)
    wells.push_back(io::json{{"lambda", x.lambda}, {"L", x.length}, {"neumann_count", x.neumann_count},
                             {"neumann_eigenvalue", x.neumann_eigenvalue}, {"neumann_bound", x.neumann_bound},
                             {"dirichlet_count", x.dirichlet_count}, {"dirichlet_bound", x.dirichlet_bound}});
  return io::json{{"robin_v0", robin}, {"weak_wells", wells}, {"ok", r.ok}};
}

}  // namespace halfline
