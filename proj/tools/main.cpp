#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kamnf/algebra.hpp"
#include "kamnf/constants.hpp"
#include "kamnf/csv.hpp"
#include "kamnf/diophantine.hpp"
#include "kamnf/errors.hpp"
#include "kamnf/io.hpp"
#include "kamnf/kam.hpp"
#include "kamnf/nls.hpp"
#include "kamnf/norms.hpp"
#include "kamnf/parallel.hpp"
#include "kamnf/toeplitz.hpp"
#include "kamnf/verify.hpp"

namespace {

using namespace kamnf;

std::uint64_t default_seed() {
  const char* env = std::getenv("KAMNF_SEED");
  if (env == nullptr || *env == '\0') return 1;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(std::string("KAMNF_SEED is not an unsigned integer: ") + env);
  }
}

lattice::Mode parse_mode(const std::string& text, int d) {
  std::vector<int> coords;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      coords.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw ValidationError("mode '" + text + "' must be comma-separated integers");
    }
  }
  if (static_cast<int>(coords.size()) != d)
    throw ValidationError("mode '" + text + "' must have " + std::to_string(d) + " coordinates");
  return lattice::Mode::from_span(coords);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    io::write_file(path, text);
}

void add_nls_flags(CLI::App* cmd, nls::NlsConfig& cfg) {
  cmd->add_option("--d", cfg.d, "lattice dimension")->capture_default_str();
  cmd->add_option("--radius", cfg.mode_radius, "sup-norm mode radius")->capture_default_str();
  cmd->add_option("--eps", cfg.epsilon, "nonlinearity strength")->capture_default_str();
  cmd->add_option("--sign", cfg.sign, "+1 or -1")->capture_default_str();
  cmd->add_option("--sigma", cfg.sigma)->capture_default_str();
  cmd->add_option("--r", cfg.r)->capture_default_str();
  cmd->add_option("--floor", cfg.floor_const)->capture_default_str();
  cmd->add_option("--degree-cap", cfg.degree_cap)->capture_default_str();
  cmd->add_flag("--physical-multiplicity", cfg.physical_multiplicity);
}

struct KamRunArgs {
  kam::KamConfig cfg;
  std::string config_file;
  std::string hamiltonian;
  std::string csv = "-";
  std::string dump_dir;
};

void kam_run(KamRunArgs& args) {
  auto cfg = args.cfg;
  if (!args.config_file.empty()) cfg = kam::parse_config(io::read_file(args.config_file), cfg);
  kam::StepObserver observe;
  if (!args.dump_dir.empty()) {
    observe = [&](const kam::StepReport& rep, const kam::KamState& st) {
      char name[64];
      std::snprintf(name, sizeof name, "%s_%03d.json", rep.initial ? "initial" : "step", rep.s);
      io::write_file(std::filesystem::path(args.dump_dir) / name, io::step_dump_json(rep, st));
    };
  }
  kam::RunResult res;
  if (args.hamiltonian.empty()) {
    res = kam::run(cfg, observe);
  } else {
    const auto h = io::hamiltonian_from_json(io::read_file(args.hamiltonian));
    const auto& p = h.params();
    cfg.d = p.lattice.d;
    cfg.sigma = p.lattice.sigma;
    cfg.floor_const = p.lattice.floor_const;
    cfg.r = p.r;
    cfg.degree_cap = p.degree_cap;
    cfg.mode_radius = p.mode_radius;
    if (!args.dump_dir.empty())
      io::write_file(std::filesystem::path(args.dump_dir) / "input.json", io::hamiltonian_to_json(h));
    res = kam::run_from(cfg, h, observe);
  }
  if (!args.dump_dir.empty())
    io::write_file(std::filesystem::path(args.dump_dir) / "omega.json", io::frequency_to_json(res.omega));
  emit(args.csv, io::steps_csv(res.reports));
}

void norms_cmd(const std::string& file, double rho) {
  const auto h = io::hamiltonian_from_json(io::read_file(file));
  std::cout << "sup_rho " << io::fmt17(ham::sup_norm(h, rho)) << '\n'
            << "star_rho " << io::fmt17(ham::star_norm(h, rho)) << '\n'
            << "plus_rho " << io::fmt17(ham::plus_norm(h, rho)) << '\n';
}

struct BracketArgs {
  std::string first;
  std::string second;
  std::string out = "-";
  double rho = 0.4;
  double delta1 = 0.09;
  double delta2 = 0.09;
};

void bracket_cmd(const BracketArgs& a) {
  const auto f = ham::expand(io::hamiltonian_from_json(io::read_file(a.first)));
  const auto g = ham::expand(io::hamiltonian_from_json(io::read_file(a.second)));
  const auto fg = ham::poisson_bracket(f, g);
  emit(a.out, io::hamiltonian_to_json(fg));
  const double cap = std::min(a.rho / 4.0, constants::rho_ceiling());
  if (!(a.delta1 > 0.0 && a.delta1 < cap && a.delta2 > 0.0 && a.delta2 < cap))
    throw ValidationError("bracket bound: delta1, delta2 must lie in (0, min(rho/4, 3 - 2 sqrt 2))");
  const auto& p = f.params().lattice;
  const double lhs = ham::sup_norm(fg, a.rho);
  const double rhs = ham::sup_norm(f, a.rho - a.delta1) * ham::sup_norm(g, a.rho - a.delta2);
  const double log_c = constants::log_bracket(p.d, p.sigma, a.delta1, a.delta2);
  std::cerr << "bracket_sup " << io::fmt17(lhs) << '\n'
            << "factor_sup_product " << io::fmt17(rhs) << '\n'
            << "log_constant " << io::fmt17(log_c) << '\n'
            << "bound_holds " << (constants::holds_log(lhs, log_c, rhs) ? 1 : 0) << '\n';
}

struct DiophArgs {
  std::string file;
  double gamma = 0.1;
  int ell_budget = 4;
  std::size_t max_listed = 20;
};

int dioph_cmd(const DiophArgs& a) {
  const auto omega = io::frequency_from_json(io::read_file(a.file));
  if (omega.empty()) throw ValidationError("frequency file has no modes");
  int radius = 0;
  for (const auto& [n, w] : omega) radius = std::max(radius, n.sup());
  const dioph::DiophParams p{a.gamma, omega.begin()->first.dim, a.ell_budget, radius};
  const auto rep = dioph::check_frequency(omega, p, {a.max_listed, false});
  std::cout << "checked " << rep.checked << " ell up to |ell| <= " << rep.ell_budget << '\n'
            << "violations " << rep.violation_count << '\n'
            << "worst_margin " << io::fmt17(rep.worst_margin) << '\n';
  for (const auto& v : rep.violations) {
    std::cout << "violation condition=" << v.which << " lhs=" << io::fmt17(v.lhs) << " rhs=" << io::fmt17(v.rhs)
              << " ell=";
    for (const auto& [m, e] : v.ell.pos.entries()) std::cout << '+' << e << '@' << lattice::to_string(m);
    for (const auto& [m, e] : v.ell.neg.entries()) std::cout << '-' << e << '@' << lattice::to_string(m);
    std::cout << '\n';
  }
  return rep.ok() ? 0 : 2;
}

struct MeasureArgs {
  int d = 1;
  int radius = 2;
  int ell_budget = 4;
  int trials = 10000;
  std::vector<double> gammas{0.01, 0.05, 0.1};
  std::uint64_t seed = 1;
  std::string out = "-";
};

void measure_cmd(const MeasureArgs& a) {
  std::vector<dioph::MeasureEstimate> rows;
  for (double g : a.gammas)
    rows.push_back(dioph::resonance_measure({g, a.d, a.ell_budget, a.radius}, a.trials, a.seed));
  emit(a.out, io::measure_csv(rows));
  if (rows.size() >= 2) {
    const auto fit = dioph::fit_measure(rows);
    std::cerr << "fitted_slope " << io::fmt17(fit.slope) << " stderr " << io::fmt17(fit.slope_stderr)
              << " monotone " << fit.monotone << " bounded " << fit.bounded << '\n';
  }
}

struct VerifyArgs {
  std::vector<std::string> lemmas;
  std::vector<std::string> params;
  std::size_t samples = 0;
  std::string suite = "all";
  std::uint64_t seed = 1;
  bool timing = false;
  std::string out = "-";
};

verify::ParamMap parse_params(const std::vector<std::string>& items) {
  verify::ParamMap out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("--param expects key=value, got '" + item + "'");
    try {
      out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ValidationError("--param value is not a number: '" + item + "'");
    }
  }
  return out;
}

void verify_cmd(const VerifyArgs& a) {
  std::vector<verify::LemmaSpec> specs;
  if (a.lemmas.empty()) {
    if (!a.params.empty()) throw ValidationError("--param needs --lemma");
    if (a.suite == "all" || a.suite == "scalar") {
      const auto s = verify::default_scalar_suite();
      specs.insert(specs.end(), s.begin(), s.end());
    }
    if (a.suite == "all" || a.suite == "norm") {
      const auto s = verify::default_norm_suite();
      specs.insert(specs.end(), s.begin(), s.end());
    }
    if (a.samples > 0)
      for (auto& s : specs) s.samples = a.samples;
  } else {
    const auto params = parse_params(a.params);
    for (const auto& name : a.lemmas) specs.push_back({name, params, a.samples > 0 ? a.samples : 1000});
  }
  const auto cases = verify::run_suite(specs, a.seed);
  emit(a.out, io::lemma_csv(cases, a.timing));
  std::size_t failed = 0;
  for (const auto& c : cases) failed += c.ok() ? 0 : 1;
  std::cerr << "cases " << cases.size() << " with_violations " << failed << '\n'
            << verify::log_sum_dual_summary(cases) << '\n';
}

struct TlArgs {
  nls::NlsConfig nls;
  std::string hamiltonian;
  std::string n = "0";
  std::string m = "2";
  std::string l = "1";
  int t_max = 0;
  double rho = 0.4;
  std::string out = "-";
};

void tl_cmd(const TlArgs& a) {
  const auto h = a.hamiltonian.empty() ? nls::build_cubic_nls(a.nls)
                                       : io::hamiltonian_from_json(io::read_file(a.hamiltonian));
  const auto& p = h.params();
  const int d = p.lattice.d;
  const auto n = parse_mode(a.n, d);
  const auto m = parse_mode(a.m, d);
  const auto l = parse_mode(a.l, d);
  const int cap = a.t_max > 0 ? a.t_max : 2 * p.mode_radius;
  const auto shifts = kam::feasible_shifts(p, n, m, l, cap);
  if (shifts.empty()) throw ValidationError("no feasible shift t keeps every translated mode inside the radius");
  emit(a.out, io::tl_csv(kam::tl_defect(ham::expand(h), n, m, l, shifts, a.rho)));
}

int dispatch(int argc, char** argv) {
  CLI::App app{"kamnf: KAM normal-form engine for the cubic NLS on a truncated lattice"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker cap, 0 = all cores; results do not depend on it");
  const std::uint64_t seed = default_seed();

  nls::NlsConfig build_cfg;
  std::string build_out = "-";
  auto* build = app.add_subcommand("build-nls", "write the truncated cubic NLS Hamiltonian");
  add_nls_flags(build, build_cfg);
  build->add_option("-o,--out", build_out, "output file, '-' for stdout");

  KamRunArgs run_args;
  run_args.cfg.seed = seed;
  auto* run = app.add_subcommand("kam-run", "run KAM steps and write the step CSV");
  auto& kc = run_args.cfg;
  run->add_option("--config", run_args.config_file, "key=value file; its settings override flags");
  run->add_option("--hamiltonian", run_args.hamiltonian, "start from this Hamiltonian file instead of the NLS");
  run->add_option("--csv", run_args.csv, "step CSV path, '-' for stdout")->capture_default_str();
  run->add_option("--dump-dir", run_args.dump_dir, "directory for per-step JSON dumps");
  run->add_option("--d", kc.d)->capture_default_str();
  run->add_option("--sigma", kc.sigma)->capture_default_str();
  run->add_option("--r", kc.r)->capture_default_str();
  run->add_option("--floor", kc.floor_const)->capture_default_str();
  run->add_option("--gamma", kc.gamma)->capture_default_str();
  run->add_option("--eps", kc.epsilon)->capture_default_str();
  run->add_option("--sign", kc.sign)->capture_default_str();
  run->add_option("--radius", kc.mode_radius)->capture_default_str();
  run->add_option("--degree-cap", kc.degree_cap)->capture_default_str();
  run->add_option("--steps", kc.steps)->capture_default_str();
  run->add_option("--seed", kc.seed, "default from KAMNF_SEED")->capture_default_str();
  run->add_option("--prune-tol", kc.prune_tol)->capture_default_str();
  run->add_option("--lie-order-cap", kc.lie_order_cap)->capture_default_str();
  run->add_option("--tail-tol", kc.tail_tol)->capture_default_str();
  run->add_option("--ell-budget", kc.ell_budget)->capture_default_str();
  run->add_flag("--strict", kc.strict, "fail on the first unmet step bound");
  run->add_flag("--force", kc.force, "run even when the entry bounds do not hold");
  run->add_flag("--physical-multiplicity", kc.physical_multiplicity);

  std::string norms_file;
  double norms_rho = 0.0;
  auto* norms = app.add_subcommand("norms", "print the sup, star and plus norms of a Hamiltonian file");
  norms->add_option("file", norms_file)->required();
  norms->add_option("--rho", norms_rho)->required();

  BracketArgs br;
  auto* bracket = app.add_subcommand("bracket", "Poisson bracket of two Hamiltonian files with the norm-bound check");
  bracket->add_option("first", br.first)->required();
  bracket->add_option("second", br.second)->required();
  bracket->add_option("-o,--out", br.out)->capture_default_str();
  bracket->add_option("--rho", br.rho)->capture_default_str();
  bracket->add_option("--delta1", br.delta1)->capture_default_str();
  bracket->add_option("--delta2", br.delta2)->capture_default_str();

  DiophArgs da;
  auto* dioph_check = app.add_subcommand("dioph-check", "check a frequency file against both Diophantine conditions");
  dioph_check->add_option("file", da.file)->required();
  dioph_check->add_option("--gamma", da.gamma)->capture_default_str();
  dioph_check->add_option("--ell-budget", da.ell_budget)->capture_default_str();
  dioph_check->add_option("--max-listed", da.max_listed)->capture_default_str();

  MeasureArgs ma;
  ma.seed = seed;
  auto* measure = app.add_subcommand("measure", "Monte Carlo resonance measure per gamma");
  measure->add_option("--d", ma.d)->capture_default_str();
  measure->add_option("--radius", ma.radius)->capture_default_str();
  measure->add_option("--ell-budget", ma.ell_budget)->capture_default_str();
  measure->add_option("--trials", ma.trials)->capture_default_str();
  measure->add_option("--gamma", ma.gammas)->capture_default_str();
  measure->add_option("--seed", ma.seed)->capture_default_str();
  measure->add_option("-o,--out", ma.out)->capture_default_str();

  VerifyArgs va;
  va.seed = seed;
  auto* verify_lemmas = app.add_subcommand("verify-lemmas", "run lemma oracles and write the suite CSV");
  verify_lemmas->add_option("--lemma", va.lemmas, "lemma name, repeatable; default is the registered suite");
  verify_lemmas->add_option("--param", va.params, "key=value override, repeatable");
  verify_lemmas->add_option("--samples", va.samples, "0 keeps each case's default");
  verify_lemmas->add_option("--suite", va.suite)->check(CLI::IsMember({"all", "scalar", "norm"}))->capture_default_str();
  verify_lemmas->add_option("--seed", va.seed)->capture_default_str();
  verify_lemmas->add_flag("--timing", va.timing, "fill the seconds column");
  verify_lemmas->add_option("-o,--out", va.out)->capture_default_str();
  verify_lemmas->add_flag_callback("--list", [] {
    for (const auto& n : verify::scalar_lemma_names()) std::cout << "scalar " << n << '\n';
    for (const auto& n : verify::norm_lemma_names()) std::cout << "norm " << n << '\n';
    throw CLI::Success();
  }, "list registered lemmas");

  TlArgs ta;
  ta.nls.mode_radius = 4;
  auto* tl = app.add_subcommand("tl-check", "Toplitz-Lipschitz defect table");
  add_nls_flags(tl, ta.nls);
  tl->add_option("--hamiltonian", ta.hamiltonian, "use this file instead of building the NLS");
  tl->add_option("--n", ta.n)->capture_default_str();
  tl->add_option("--m", ta.m)->capture_default_str();
  tl->add_option("--l", ta.l)->capture_default_str();
  tl->add_option("--t-max", ta.t_max, "0 means twice the radius");
  tl->add_option("--rho", ta.rho)->capture_default_str();
  tl->add_option("-o,--out", ta.out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  set_thread_count(threads);

  if (*build) emit(build_out, io::hamiltonian_to_json(nls::build_cubic_nls(build_cfg)));
  if (*run) kam_run(run_args);
  if (*norms) norms_cmd(norms_file, norms_rho);
  if (*bracket) bracket_cmd(br);
  if (*dioph_check) return dioph_cmd(da);
  if (*measure) measure_cmd(ma);
  if (*verify_lemmas) verify_cmd(va);
  if (*tl) tl_cmd(ta);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const kamnf::SmallDivisorError& e) {
    std::cerr << "small divisor: " << e.what() << '\n';
    return 2;
  } catch (const kamnf::CapacityError& e) {
    std::cerr << "capacity: " << e.what() << '\n';
    return 3;
  } catch (const kamnf::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const kamnf::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
