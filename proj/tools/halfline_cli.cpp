// halfline - command line front end
//
// Exit codes: 0 ok, 2 invalid input, 3 bound violated, 4 numerical failure or no convergence.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include <halfline/halfline.hpp>

namespace {

using namespace halfline;
using io::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitViolation = 3;
constexpr int kExitNumerical = 4;

struct Args {
  std::string input;
  std::string out = "-";
  std::string format = "json";
  std::uint64_t seed = 1;
  int trials = 200;
  int n_max = 4;
  double energy = -0.5;
  bool energy_set = false;
  int nodes = 0;
  bool ladder = false;
  double x_max = 5.0;
  int points = 21;
};

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  f << text;
}

json with_warnings(json j, const Instance& inst) {
  if (!inst.warnings.empty()) j["warnings"] = inst.warnings;
  return j;
}

double energy_for(const Args& a, const Instance& inst) {
  if (a.energy_set || inst.options.energies.empty()) return a.energy;
  return inst.options.energies.front();
}

int cmd_validate(const Args& a) {
  const Instance inst = io::load_instance(a.input);
  io::emit_report(with_warnings(json{{"valid", true}, {"n", inst.pair.n()}}, inst), a.out);
  return kExitOk;
}

int cmd_classify(const Args& a) {
  const Instance inst = io::load_instance(a.input);
  io::emit_report(with_warnings(io::classification_to_json(classify(inst.pair, inst.options.eps_class)), inst), a.out);
  return kExitOk;
}

int cmd_bound(const Args& a) {
  const Instance inst = io::load_instance(a.input);
  const BoundResult b = bargmann_bound(inst.pair, inst.potential, inst.options.eps_class);
  io::emit_report(with_warnings(io::bound_to_json(b), inst), a.out);
  return kExitOk;
}

int cmd_count(const Args& a) {
  const Instance inst = io::load_instance(a.input);
  LadderOptions ladder;
  ladder.rungs = inst.options.ladder;
  if (a.energy_set) ladder.shift = a.energy;
  const CountReport r = converge_count(inst.pair, inst.potential, ladder);
  if (a.ladder || a.format == "csv") write_text(io::ladder_csv(r), a.out);
  else io::emit_report(with_warnings(io::count_to_json(r), inst), a.out);
  return r.converged ? kExitOk : kExitNumerical;
}

int cmd_bs_count(const Args& a) {
  const Instance inst = io::load_instance(a.input);
  const int nodes = a.nodes > 0 ? a.nodes : inst.options.nodes > 0 ? inst.options.nodes : default_bs_nodes(inst.potential);
  const BSReport r = bs_analyze(inst.pair, inst.potential, energy_for(a, inst), nodes);
  io::emit_report(with_warnings(io::bs_to_json(r), inst), a.out);
  return kExitOk;
}

int cmd_kernel(const Args& a) {
  const Instance inst = io::load_instance(a.input);
  const ResolventKernel kernel(classify(inst.pair, inst.options.eps_class), cplx(energy_for(a, inst), 0.0));
  const int n = inst.pair.n();
  std::ostringstream os;
  os.precision(17);
  os << "x,y";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) os << ",re_" << i << j;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) os << ",im_" << i << j;
  os << '\n';
  const int pts = std::max(a.points, 2);
  for (int p = 0; p < pts; ++p)
    for (int q = 0; q < pts; ++q) {
      const double x = a.x_max * p / (pts - 1);
      const double y = a.x_max * q / (pts - 1);
      const CMatrix r = kernel(x, y);
      os << x << ',' << y;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) os << ',' << r(i, j).real();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) os << ',' << r(i, j).imag();
      os << '\n';
    }
  write_text(os.str(), a.out);
  return kExitOk;
}

int cmd_verify(const Args& a) {
  VerifyOptions opts;
  opts.trials = a.trials;
  opts.n_max = a.n_max;
  opts.seed = a.seed;
  opts.energy = a.energy;
  if (!a.input.empty()) opts.injected.push_back(io::load_instance(a.input));
  const VerifyReport r = run_verify(opts);
  io::emit_report(verify_to_json(r, opts), a.out);
  std::fprintf(stderr, "verify: %d trials, %zu violations, %.1f s\n", r.trials, r.violations.size(),
               r.elapsed_seconds);
  if (!r.violations.empty()) {
    for (const auto& v : r.violations) {
      const std::string path = "violation_trial_" + std::to_string(v.trial) + ".json";
      std::ofstream(path) << io::dump(v.instance);
      std::fprintf(stderr, "violation (%s) in trial %d: %s; instance written to %s\n", v.kind.c_str(), v.trial,
                   v.detail.c_str(), path.c_str());
    }
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_demo_remark(const Args& a) {
  const RemarkReport r = run_remark_demo();
  io::emit_report(remark_to_json(r), a.out);
  return r.ok ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bound-state counting for half-line matrix Schrodinger operators"};
  app.require_subcommand(1);
  Args args;

  const auto add_io = [&](CLI::App* sub, bool needs_input) {
    auto* opt = sub->add_option("--input", args.input, "instance JSON file");
    if (needs_input) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "output path, '-' for stdout");
    sub->add_option("--format", args.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  const auto add_energy = [&](CLI::App* sub) {
    sub->add_option_function<double>("--E", [&](double e) { args.energy = e, args.energy_set = true; },
                                     "spectral parameter E < 0");
  };

  auto* validate = app.add_subcommand("validate", "check an instance file");
  add_io(validate, true);
  auto* cls = app.add_subcommand("classify", "angles, counts and frame of the boundary condition");
  add_io(cls, true);
  auto* bound = app.add_subcommand("bound", "the eigenvalue-count bound");
  add_io(bound, true);
  auto* count = app.add_subcommand("count", "finite-element eigenvalue count");
  add_io(count, true);
  add_energy(count);
  count->add_flag("--ladder", args.ladder, "print the convergence table as CSV");
  auto* bs = app.add_subcommand("bs-count", "Birman-Schwinger eigenvalue count below E");
  add_io(bs, true);
  add_energy(bs);
  bs->add_option("--nodes", args.nodes, "trapezoid nodes on the support of V");
  auto* kernel = app.add_subcommand("kernel", "sample the free resolvent kernel as CSV");
  add_io(kernel, true);
  add_energy(kernel);
  kernel->add_option("--x-max", args.x_max, "sample on [0, x-max]^2");
  kernel->add_option("--points", args.points, "points per axis");
  auto* verify = app.add_subcommand("verify", "randomized check of the bound against both counters");
  add_io(verify, false);
  add_energy(verify);
  verify->add_option("--seed", args.seed);
  verify->add_option("--trials", args.trials);
  verify->add_option("--n-max", args.n_max);
  auto* demo = app.add_subcommand("demo-remark", "zero-potential Robin states and weak Neumann binding");
  add_io(demo, false);

  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  int rc = kExitOk;
  try {
    if (*validate) rc = cmd_validate(args);
    else if (*cls) rc = cmd_classify(args);
    else if (*bound) rc = cmd_bound(args);
    else if (*count) rc = cmd_count(args);
    else if (*bs) rc = cmd_bs_count(args);
    else if (*kernel) rc = cmd_kernel(args);
    else if (*verify) rc = cmd_verify(args);
    else if (*demo) rc = cmd_demo_remark(args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    rc = is_numerical(e.kind()) ? kExitNumerical : kExitInvalid;
  }
  std::fprintf(stderr, "elapsed %.3f s\n",
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return rc;
}
