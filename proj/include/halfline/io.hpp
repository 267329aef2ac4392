// io.hpp - JSON encoding of matrices, pairs, potentials, instances and reports
//
// Matrices are flat row-major arrays of [re, im] pairs. Objects are written with a fixed key
// order so that reports diff cleanly.
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bound.hpp"
#include "boundary.hpp"
#include "bs_operator.hpp"
#include "error.hpp"
#include "fd_oracle.hpp"
#include "instance.hpp"
#include "potential.hpp"

namespace halfline::io {

using json = nlohmann::ordered_json;

/// Rounds to 15 significant digits so the shortest round-trip form has at most 15 digits.
inline double round15(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

[[noreturn]] inline void parse_fail(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::ParseError, "field '" + field + "': " + why);
}

inline const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) parse_fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

inline double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) parse_fail(path, "expected a number");
  return j.get<double>();
}

inline json matrix_to_json(const CMatrix& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
  return out;
}

inline cplx complex_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    parse_fail(path, "complex entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline CMatrix matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) parse_fail(path, "expected a non-empty array of [re, im] pairs");
  const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(j.size()))));
  if (static_cast<std::size_t>(n) * n != j.size())
    parse_fail(path, std::to_string(j.size()) + " entries is not a square matrix");
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c)
      m(i, c) = complex_from_json(j[i * n + c], path + "[" + std::to_string(i * n + c) + "]");
  return m;
}

inline json pair_to_json(const BoundaryPair& p) {
  return json{{"A", matrix_to_json(p.A())}, {"B", matrix_to_json(p.B())}};
}

inline BoundaryPair pair_from_json(const json& j, const std::string& path) {
  if (j.is_object() && j.contains("thetas")) {
    const json& t = j["thetas"];
    if (!t.is_array()) parse_fail(path + ".thetas", "expected an array");
    std::vector<double> thetas;
    for (std::size_t i = 0; i < t.size(); ++i)
      thetas.push_back(as_number(t[i], path + ".thetas[" + std::to_string(i) + "]"));
    return diagonal_pair(thetas);
  }
  const CMatrix a = matrix_from_json(require(j, "A", path), path + ".A");
  const CMatrix b = matrix_from_json(require(j, "B", path), path + ".B");
  return validate_pair(a, b);
}

inline json potential_to_json(const MatrixPotential& v) {
  struct Visitor {
    json operator()(const potentials::Zero& p) const { return json{{"kind", "zero"}, {"n", p.n}}; }
    json operator()(const potentials::SquareWell& p) const {
      return json{{"kind", "square_well"}, {"depth", matrix_to_json(p.depth)}, {"a", p.a}, {"b", p.b}};
    }
    json operator()(const potentials::Exponential& p) const {
      return json{{"kind", "exp"}, {"coefficient", matrix_to_json(p.coefficient)}, {"mu", p.mu}};
    }
    json operator()(const potentials::Bump& p) const {
      return json{{"kind", "bump"}, {"coefficient", matrix_to_json(p.coefficient)}, {"a", p.a}, {"b", p.b}};
    }
    json operator()(const potentials::Sampled& p) const {
      json vs = json::array();
      for (const auto& v : p.values) vs.push_back(matrix_to_json(v));
      return json{{"kind", "sampled"}, {"xs", p.xs}, {"vs", vs}};
    }
  };
  return std::visit(Visitor{}, v.preset());
}

inline MatrixPotential potential_from_json(const json& j, const std::string& path) {
  const json& kind_j = require(j, "kind", path);
  if (!kind_j.is_string()) parse_fail(path + ".kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();
  const auto num = [&](const char* key) { return as_number(require(j, key, path), path + "." + key); };
  const auto mat = [&](const char* key) { return matrix_from_json(require(j, key, path), path + "." + key); };
  if (kind == "zero") {
    const json& n = require(j, "n", path);
    if (!n.is_number_integer()) parse_fail(path + ".n", "expected an integer");
    return MatrixPotential::zero(n.get<int>());
  }
  if (kind == "square_well") return MatrixPotential::square_well(mat("depth"), num("a"), num("b"));
  if (kind == "exp") return MatrixPotential::exponential(mat("coefficient"), num("mu"));
  if (kind == "bump") return MatrixPotential::bump(mat("coefficient"), num("a"), num("b"));
  if (kind == "sampled") {
    const json& xs = require(j, "xs", path);
    const json& vs = require(j, "vs", path);
    if (!xs.is_array() || !vs.is_array()) parse_fail(path, "xs and vs must be arrays");
    std::vector<double> grid;
    std::vector<CMatrix> values;
    for (std::size_t i = 0; i < xs.size(); ++i) grid.push_back(as_number(xs[i], path + ".xs[" + std::to_string(i) + "]"));
    for (std::size_t i = 0; i < vs.size(); ++i) values.push_back(matrix_from_json(vs[i], path + ".vs[" + std::to_string(i) + "]"));
    return MatrixPotential::sampled(std::move(grid), std::move(values));
  }
  parse_fail(path + ".kind", "unknown potential kind '" + kind + "'");
}

inline json options_to_json(const InstanceOptions& o) {
  json ladder = json::array();
  for (const auto& d : o.ladder) ladder.push_back(json::array({d.length, d.h}));
  return json{{"eps_class", o.eps_class}, {"ladder", ladder}, {"E", o.energies},
              {"nodes", o.nodes}, {"seed", o.seed}};
}

inline InstanceOptions options_from_json(const json& j, const std::string& path) {
  InstanceOptions o;
  if (!j.is_object()) parse_fail(path, "expected an object");
  if (j.contains("eps_class")) o.eps_class = as_number(j["eps_class"], path + ".eps_class");
  if (j.contains("ladder")) {
    const json& l = j["ladder"];
    if (!l.is_array()) parse_fail(path + ".ladder", "expected an array of [L, h]");
    o.ladder.clear();
    for (std::size_t i = 0; i < l.size(); ++i) {
      const std::string p = path + ".ladder[" + std::to_string(i) + "]";
      if (!l[i].is_array() || l[i].size() != 2) parse_fail(p, "expected [L, h]");
      o.ladder.push_back({as_number(l[i][0], p), as_number(l[i][1], p)});
    }
  }
  if (j.contains("E")) {
    const json& e = j["E"];
    o.energies.clear();
    if (e.is_number()) o.energies.push_back(e.get<double>());
    else if (e.is_array())
      for (std::size_t i = 0; i < e.size(); ++i) o.energies.push_back(as_number(e[i], path + ".E[" + std::to_string(i) + "]"));
    else parse_fail(path + ".E", "expected a number or an array");
  }
  if (j.contains("nodes")) {
    if (!j["nodes"].is_number_integer()) parse_fail(path + ".nodes", "expected an integer");
    o.nodes = j["nodes"].get<int>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) parse_fail(path + ".seed", "expected a non-negative integer");
    o.seed = j["seed"].get<std::uint64_t>();
  }
  return o;
}

inline json instance_to_json(const Instance& inst) {
  return json{{"pair", pair_to_json(inst.pair)},
              {"potential", potential_to_json(inst.potential)},
              {"options", options_to_json(inst.options)}};
}

inline Instance instance_from_json(const json& j) {
  if (!j.is_object()) parse_fail("<root>", "expected an object");
  BoundaryPair pair = pair_from_json(require(j, "pair", ""), "pair");
  std::vector<std::string> warnings;
  MatrixPotential v = MatrixPotential::zero(pair.n());
  if (j.contains("potential")) {
    v = potential_from_json(j["potential"], "potential");
  } else {
    warnings.push_back("potential missing; using V = 0");
  }
  if (v.n() != pair.n())
    throw Error(ErrorKind::DimensionMismatch, "potential is " + std::to_string(v.n()) +
                                                  "x" + std::to_string(v.n()) + " but the pair has n = " +
                                                  std::to_string(pair.n()));
  InstanceOptions o = j.contains("options") ? options_from_json(j["options"], "options") : InstanceOptions{};
  return Instance{std::move(pair), std::move(v), std::move(o), std::move(warnings)};
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json(parse_text(ss.str()));
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void emit_report(const json& report, const std::string& path) {
  if (path.empty() || path == "-") {
    const std::string text = dump(report);
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << dump(report);
}

inline json classification_to_json(const BoundaryClassification& c) {
  json thetas = json::array();
  for (double t : c.thetas) thetas.push_back(round15(t));
  json theta = json::array(), theta_t = json::array();
  for (int j = 0; j < c.n(); ++j) {
    theta.push_back(c.Theta(j));
    theta_t.push_back(c.ThetaT(j));
  }
  return json{{"n", c.n()},       {"thetas", thetas}, {"n_N", c.n_N},      {"n_D", c.n_D},
              {"n_M", c.n_M},     {"n_Mb", c.n_Mb},   {"Theta", theta},    {"ThetaT", theta_t},
              {"U", matrix_to_json(c.U)}, {"M", matrix_to_json(c.M)}};
}

inline json bound_to_json(const BoundResult& b) {
  return json{{"n_Mb", b.n_Mb}, {"n_N", b.n_N}, {"integral", b.integral}, {"total", b.total},
              {"integer_bound", b.integer_bound}};
}

inline json count_to_json(const CountReport& r) {
  json rungs = json::array();
  for (const auto& d : r.diagnostics) rungs.push_back(json{{"L", d.length}, {"h", d.h}, {"count", d.count}});
  return json{{"count", r.count}, {"eigenvalues", r.eigenvalues}, {"converged", r.converged},
              {"near_zero", r.near_zero}, {"ladder", rungs}};
}

inline std::string ladder_csv(const CountReport& r) {
  std::ostringstream os;
  os << "L,h,count\n";
  for (const auto& d : r.diagnostics) os << d.length << ',' << d.h << ',' << d.count << '\n';
  return os.str();
}

inline json bs_to_json(const BSReport& r) {
  return json{{"count", r.count}, {"free_count", r.free_count}, {"crossings", r.crossings},
              {"trace", r.trace}, {"top_eigenvalues", r.top_eigenvalues}};
}

}  // namespace halfline::io
