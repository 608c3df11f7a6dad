// tsmkit: command-line front end for groups, reductions, twisted means and the verification suites.

#include "tsmkit/group.hpp"
#include "tsmkit/io.hpp"
#include "tsmkit/quadrature.hpp"
#include "tsmkit/radial.hpp"
#include "tsmkit/symplectic.hpp"
#include "tsmkit/twisted_mean.hpp"
#include "tsmkit/verify.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>

namespace {

using namespace tsmkit;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kError = 3;

struct Options {
  std::string group;
  std::string lambda;
  std::string config;
  std::string quad;
  double tol = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  // mean
  std::string f;
  std::string z;
  double s = 1.0;
  bool reduced = false;
  // ode-check
  int p = 0, q = 0, n = 1;
  std::string nu = "-1";
  std::string schedule = "standard";
  // verify
  std::string suite;
  bool no_timing = false;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw std::runtime_error("cannot write '" + o.out + "'");
  f << text;
}

std::string csv_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int cmd_validate(const Options& o) {
  const GroupSpec g = load_group(o.group);
  MetivierOptions mo;
  mo.seed = o.seed;
  const ValidationReport rep = validate_group(g.group, g.mode, mo);
  const bool ok = rep.all_pass() && (!rep.metivier || rep.metivier->pass());
  if (o.format == "csv") {
    std::string text = "condition,pass,residual,tolerance\n";
    for (const auto& c : rep.conditions)
      text += c.name + "," + (c.pass ? "1" : "0") + "," + csv_number(c.residual) + "," + csv_number(c.tolerance) + "\n";
    if (rep.metivier)
      text += "metivier," + std::string(rep.metivier->pass() ? "1" : "0") + "," +
              csv_number(rep.metivier->min_abs_det) + "," + csv_number(rep.metivier->tolerance) + "\n";
    emit(o, text);
  } else {
    json j = to_json(rep);
    j["group_hash"] = group_hash(g.group);
    emit(o, j.dump(2) + "\n");
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_reduce(const Options& o) {
  const GroupSpec g = load_group(o.group);
  const ReducedFrame f = reduce(g.group, parse_real_list(o.lambda));
  if (o.format == "csv") {
    std::string text = "j,mu\n";
    for (Eigen::Index j = 0; j < f.mu.size(); ++j) text += std::to_string(j) + "," + csv_number(f.mu[j]) + "\n";
    emit(o, text);
  } else {
    emit(o, to_json(f, true).dump(2) + "\n");
  }
  return kOk;
}

int cmd_mean(const Options& o) {
  const GroupSpec g = load_group(o.group);
  const RVec lambda = parse_real_list(o.lambda);
  const Evaluable f(type_function_from_json(read_json_file(o.f)));
  const CVec z = parse_complex_list(o.z);
  const QuadratureRule rule = o.quad.empty() ? QuadratureRule{} : QuadratureRule::parse(o.quad);
  MeanResult m;
  if (o.reduced) {
    m = reduced_tsm(reduce(g.group, lambda).mu, f, z, o.s, rule);
  } else {
    m = tsm(g.group, lambda, f, z, o.s, rule);
  }
  if (o.format == "csv") {
    emit(o, "re,im,err_estimate,nodes\n" + csv_number(m.value.real()) + "," + csv_number(m.value.imag()) + "," +
                csv_number(m.err_estimate) + "," + std::to_string(m.nodes) + "\n");
  } else {
    const json j = {{"re", m.value.real()}, {"im", m.value.imag()}, {"err_estimate", m.err_estimate},
                    {"nodes", m.nodes},     {"rule", m.rule}};
    emit(o, j.dump(2) + "\n");
  }
  return kOk;
}

int cmd_ode_check(const Options& o) {
  const RVec parts = parse_real_list(o.nu);
  const cplx nu(parts[0], parts.size() > 1 ? parts[1] : 0.0);
  const double tol = o.tol > 0.0 ? o.tol : 1e-12;
  const OperatorStack stack = build_stack(o.p, o.q, o.n, parse_kappa_schedule(o.schedule), nu, nu);
  std::vector<cplx> A, B;
  for (int i = 1; i <= o.p; ++i) A.emplace_back(1.0 + 0.5 * i, 0.25 * i);
  for (int k = 1; k <= o.q; ++k) B.emplace_back(0.5 + k, -0.125 * k);
  const RadialSum family = solution_family(o.p, o.q, o.n, nu, nu, A, B);
  const AnnihilationReport rep = annihilation_check(stack, family, tol);
  if (o.format == "csv") {
    emit(o, "n,p,q,residual,tolerance,pass\n" + std::to_string(o.n) + "," + std::to_string(o.p) + "," +
                std::to_string(o.q) + "," + csv_number(rep.residual) + "," + csv_number(tol) + "," +
                (rep.pass ? "1" : "0") + "\n");
  } else {
    json atoms = json::array();
    for (const auto& a : stack.atoms) atoms.push_back(a.label);
    const json j = {{"n", o.n},          {"p", o.p},
                    {"q", o.q},          {"nu", complex_to_json(nu)},
                    {"schedule", o.schedule}, {"stack", atoms},
                    {"family", to_json(family)}, {"result", to_json(rep.result)},
                    {"residual", rep.residual}, {"tolerance", tol},
                    {"pass", rep.pass}};
    emit(o, j.dump(2) + "\n");
  }
  return rep.pass ? kOk : kCheckFailed;
}

int cmd_verify(const Options& o, const CLI::App& sub) {
  SuiteConfig c;
  if (!o.config.empty()) c = SuiteConfig::from_file(o.config);
  if (!o.suite.empty()) c.suite = o.suite;
  if (c.suite.empty()) throw std::invalid_argument("verify: no suite given (use --suite or a config with \"suite\")");
  if (!o.group.empty()) c.groups = {json(o.group)};
  if (!o.lambda.empty()) c.lambdas = {parse_real_list(o.lambda)};
  if (!o.quad.empty()) c.quad = QuadratureRule::parse(o.quad);
  if (sub.count("--tol")) {
    if (!(o.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
    c.tol = o.tol;
  }
  if (sub.count("--seed")) c.seed = o.seed;
  Options out = o;
  if (out.out.empty()) out.out = c.output;

  const SuiteReport rep = run_suite(c);
  emit(out, out.format == "csv" ? rep.to_csv() : rep.to_json(!o.no_timing).dump(2) + "\n");
  std::cerr << "suite " << rep.suite << ": " << rep.cases_passed() << "/" << rep.case_count() << " cases passed, "
            << rep.controls_failed_as_expected() << "/" << rep.control_count() << " controls failed as expected -> "
            << (rep.pass() ? "PASS" : "FAIL") << "\n";
  return rep.pass() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tsmkit: twisted spherical means on step-two nilpotent groups"};
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* s) {
    s->add_option("--out", o.out, "Write output to PATH instead of stdout");
    s->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* validate = app.add_subcommand("validate", "Check the structural conditions of a group");
  validate->add_option("--group", o.group, "Group JSON file or builtin name (heisenberg, heisenberg:N, quaternionic)")
      ->required();
  validate->add_option("--seed", o.seed, "Seed for the sampled non-degeneracy check");
  add_format(validate);

  auto* reduce_cmd = app.add_subcommand("reduce", "Compute the symplectic frame of V_lambda");
  reduce_cmd->add_option("--group", o.group, "Group JSON file or builtin name")->required();
  reduce_cmd->add_option("--lambda", o.lambda, "Comma-separated lambda")->required();
  add_format(reduce_cmd);

  auto* mean = app.add_subcommand("mean", "Evaluate a twisted spherical mean");
  mean->add_option("--group", o.group, "Group JSON file or builtin name")->required();
  mean->add_option("--lambda", o.lambda, "Comma-separated lambda")->required();
  mean->add_option("--f", o.f, "Function JSON {\"n\", \"summands\": [{\"radial\", \"angular\"}]}")->required();
  mean->add_option("--z", o.z, "Centre as interleaved re,im pairs")->required();
  mean->add_option("--s", o.s, "Sphere radius")->check(CLI::PositiveNumber);
  mean->add_option("--quad", o.quad, "angles:N | mc:N[@SEED] | exact[:K]");
  mean->add_flag("--reduced", o.reduced, "Use the reduced form with mu from the frame");
  add_format(mean);

  auto* ode = app.add_subcommand("ode-check", "Apply an operator stack to its solution family");
  ode->add_option("--p", o.p, "Holomorphic degree")->check(CLI::NonNegativeNumber);
  ode->add_option("--q", o.q, "Antiholomorphic degree")->check(CLI::NonNegativeNumber);
  ode->add_option("--n", o.n, "Complex dimension")->check(CLI::PositiveNumber);
  ode->add_option("--nu", o.nu, "Twist coefficient as re[,im]");
  ode->add_option("--schedule", o.schedule, "Kappa schedule")->check(CLI::IsMember({"standard", "ascending"}));
  ode->add_option("--tol", o.tol, "Residual tolerance");
  add_format(ode);

  auto* verify = app.add_subcommand("verify", "Run a named verification suite");
  verify->add_option("--suite", o.suite, "Suite name")->check(CLI::IsMember(suite_names()));
  verify->add_option("--config", o.config, "Suite config JSON");
  verify->add_option("--group", o.group, "Group JSON file or builtin name (overrides the config)");
  verify->add_option("--lambda", o.lambda, "Comma-separated lambda (overrides the config)");
  verify->add_option("--quad", o.quad, "Quadrature rule (overrides the config)");
  verify->add_option("--tol", o.tol, "Tolerance (overrides the suite default)");
  verify->add_option("--seed", o.seed, "Seed (overrides the config)");
  verify->add_flag("--no-timing", o.no_timing, "Omit wall-clock timing from the JSON report");
  add_format(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (auto* s : app.get_subcommands())
      if (s->parsed()) failing = s;
    std::cerr << failing->help();
    return kUsage;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*reduce_cmd) return cmd_reduce(o);
    if (*mean) return cmd_mean(o);
    if (*ode) return cmd_ode_check(o);
    if (*verify) return cmd_verify(o, *verify);
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what();
    if (e.index() >= 0) std::cerr << " (item " << e.index() << ")";
    std::cerr << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kUsage;
}
