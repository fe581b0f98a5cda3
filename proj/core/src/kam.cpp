#include "kamnf/kam.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "kamnf/algebra.hpp"
#include "kamnf/constants.hpp"
#include "kamnf/errors.hpp"
#include "kamnf/lie.hpp"
#include "kamnf/nls.hpp"
#include "kamnf/norms.hpp"

namespace kamnf::kam {

void KamConfig::validate() const {
  ham_params().validate();
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must be in (0,1), got " + std::to_string(gamma));
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
  if (!(eps0() < 1.0)) throw ValidationError("epsilon/(2pi)^d must be < 1");
  if (sign != 1 && sign != -1) throw ValidationError("sign must be +1 or -1");
  if (degree_cap < 4) throw ValidationError("degree_cap must be >= 4");
  if (steps < 0) throw ValidationError("steps must be >= 0");
  if (!(prune_tol >= 0.0)) throw ValidationError("prune_tol must be >= 0");
  if (lie_order_cap < 1) throw ValidationError("lie_order_cap must be >= 1");
  if (!(tail_tol >= 0.0)) throw ValidationError("tail_tol must be >= 0");
  if (ell_budget < 1) throw ValidationError("ell_budget must be >= 1");
}

ham::HamParams KamConfig::ham_params() const { return {{d, sigma, floor_const}, r, degree_cap, mode_radius}; }

double KamConfig::eps0() const { return nls::quartic_coefficient(epsilon, d); }

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  T out{};
  is >> out;
  if (!is || !(is >> std::ws).eof()) throw ValidationError("bad value for " + key + ": '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ValidationError("bad boolean for " + key + ": '" + v + "'");
}

}  // namespace

void apply_setting(KamConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "d") cfg.d = parse_number<int>(key, value);
  else if (key == "sigma") cfg.sigma = parse_number<double>(key, value);
  else if (key == "r") cfg.r = parse_number<double>(key, value);
  else if (key == "floor_const") cfg.floor_const = parse_number<double>(key, value);
  else if (key == "gamma") cfg.gamma = parse_number<double>(key, value);
  else if (key == "epsilon") cfg.epsilon = parse_number<double>(key, value);
  else if (key == "sign") cfg.sign = parse_number<int>(key, value);
  else if (key == "mode_radius") cfg.mode_radius = parse_number<int>(key, value);
  else if (key == "degree_cap") cfg.degree_cap = parse_number<int>(key, value);
  else if (key == "steps") cfg.steps = parse_number<int>(key, value);
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "prune_tol") cfg.prune_tol = parse_number<double>(key, value);
  else if (key == "lie_order_cap") cfg.lie_order_cap = parse_number<int>(key, value);
  else if (key == "tail_tol") cfg.tail_tol = parse_number<double>(key, value);
  else if (key == "ell_budget") cfg.ell_budget = parse_number<int>(key, value);
  else if (key == "strict") cfg.strict = parse_bool(key, value);
  else if (key == "force") cfg.force = parse_bool(key, value);
  else if (key == "physical_multiplicity") cfg.physical_multiplicity = parse_bool(key, value);
  else throw ValidationError("unknown config key: " + key);
}

KamConfig parse_config(const std::string& text, KamConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("config line " + std::to_string(lineno) + " lacks '='");
    apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

KamState initial_state(const KamConfig& cfg, const Hamiltonian& h, const dioph::FrequencyVector& omega) {
  nls::NlsConfig ncfg{cfg.d, cfg.mode_radius, cfg.epsilon, cfg.sign, cfg.sigma, cfg.r, cfg.floor_const, cfg.degree_cap,
                      cfg.physical_multiplicity};
  KamState st;
  st.nf = nls::build_normal_form(ncfg, omega);
  st.omega = omega;
  st.v_star = st.nf.v_hat;
  for (const auto& [m, w] : omega) st.hat_shift[m] = 0.0;
  auto parts = ham::class_split(h);
  st.r0 = std::move(parts.r0);
  st.r1 = std::move(parts.r1);
  st.r2 = std::move(parts.r2);
  st.error_budget = h.error_budget();
  return st;
}

ClassNorms plus_norms(const KamState& state, double rho) {
  return {ham::plus_norm(state.r0, rho), ham::plus_norm(state.r1, rho), ham::plus_norm(state.r2, rho)};
}

namespace {

double term_star(const ham::TermKey& key, const ham::HamParams& p, double rho) {
  double w = ham::star_weight({key.a, key.k, key.k_bar, {}}, p, rho);
  for (const auto& m : key.j) {
    const double wm = lattice::weight(m, p.lattice);
    w *= std::exp(-2.0 * rho * wm) + std::exp(-2.0 * p.r * wm);
  }
  return w;
}

Hamiltonian prune(const Hamiltonian& h, double tol, double rho, double& pruned) {
  if (tol <= 0.0) return h;
  std::vector<ham::TermEntry> kept;
  for (const auto& [key, c] : h) {
    const double mass = std::abs(c) * term_star(key, h.params(), rho);
    if (mass < tol) pruned += mass;
    else kept.emplace_back(key, c);
  }
  auto out = Hamiltonian::from_entries(h.params(), std::move(kept));
  out.set_error(h.error_budget());
  return out;
}

bool precondition_holds(const ClassNorms& n, const ScheduleParams& sched, double eps0) {
  return n.r0 <= sched.eps && n.r1 <= std::pow(sched.eps, 0.6) && n.r2 <= (1.0 + sched.d_s) * eps0;
}

std::map<Mode, double> frequency_shift(const Hamiltonian& resonant1, const std::vector<Mode>& modes) {
  const auto& p = resonant1.params();
  std::map<Mode, double> shift;
  for (const auto& m : modes) shift[m] = 0.0;
  for (const auto& [key, c] : resonant1) {
    double v = c.real();
    for (const auto& [m, e] : key.a.entries()) v *= std::pow(ham::initial_action(m, p), e);
    shift[key.j.front()] += v;
  }
  return shift;
}

}  // namespace

bool shift_envelope_decays(const std::map<Mode, double>& hat_part, double slack) {
  std::map<std::int64_t, double> shells;
  for (const auto& [m, v] : hat_part) {
    double& s = shells[m.norm2()];
    s = std::max(s, std::abs(v) * dioph::angle_norm(m));
  }
  double running = -1.0;
  for (const auto& [n2, v] : shells) {
    if (running >= 0.0 && v > running + slack * std::sqrt(std::max<double>(1.0, n2))) return false;
    running = std::max(running, v);
  }
  return true;
}

std::pair<KamState, StepReport> kam_step(const KamState& state, const ScheduleParams& sched, const KamConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& p = state.r0.params();
  const double eps0 = cfg.eps0();
  const ScheduleParams next = schedule(sched.s + 1, eps0);
  StepReport rep;
  rep.s = sched.s;
  rep.rho = sched.rho;
  rep.rho_next = next.rho;
  rep.eps = sched.eps;
  rep.eps_next = sched.eps_next;
  rep.before = plus_norms(state, sched.rho);
  if (!cfg.force && !precondition_holds(rep.before, sched, eps0))
    throw ValidationError("step " + std::to_string(sched.s) + " entry bounds fail; rerun with force=1");

  homological::SolveOptions sopts{cfg.gamma * std::pow(sched.eps, 0.01), truncation_budget(sched.s, eps0), sched.rho};
  const auto sol = homological::solve_homological(state.r0, state.r1, state.nf, sopts);
  rep.min_divisor = sol.stats.min_divisor;
  rep.min_guard_ratio = sol.stats.min_ratio_to_guard;
  rep.homological_residual = homological::homological_residual(sol, state.r0, state.r1, state.nf, sched.rho);
  rep.eliminated = sol.stats.eliminated;
  rep.deferred = sol.stats.deferred;
  rep.deferred_mass = sol.stats.deferred_mass;

  const Hamiltonian f = ham::expand(linear_combine(1.0, sol.f0, 1.0, sol.f1));
  ham::LieOptions lopts{cfg.lie_order_cap, cfg.tail_tol, sched.rho, sched.delta, true};
  const Hamiltonian eliminated = ham::expand(linear_combine(1.0, sol.eliminated0, 1.0, sol.eliminated1));
  const auto c0 = ham::lie_chain(state.r0, f, lopts, 0);
  const auto c1 = ham::lie_chain(state.r1, f, lopts, 0);
  const auto c2 = ham::lie_chain(state.r2, f, lopts, 0);
  const auto cn = ham::lie_chain(linear_combine(-1.0, eliminated, 0.0, eliminated), f, lopts, 1);
  rep.chain_plus = {ham::plus_norm(c0.value, sched.rho), ham::plus_norm(c1.value, sched.rho),
                    ham::plus_norm(c2.value, sched.rho)};
  rep.nf_chain_plus = ham::plus_norm(cn.value, sched.rho);
  rep.lie_smallness = c0.smallness_holds;
  rep.tail_bound = c0.tail_bound + c1.tail_bound + c2.tail_bound + cn.tail_bound;
  rep.dropped_bound = c0.dropped_bound + c1.dropped_bound + c2.dropped_bound + cn.dropped_bound;

  Hamiltonian remainder = linear_combine(1.0, sol.deferred0, 1.0, sol.deferred1);
  for (const Hamiltonian* part : {&state.r2, &c0.value, &c1.value, &c2.value, &cn.value})
    remainder = linear_combine(1.0, remainder, 1.0, *part);
  auto classes = ham::class_split(remainder);

  KamState out;
  out.s = state.s + 1;
  out.omega = state.omega;
  out.r0 = prune(classes.r0, cfg.prune_tol, next.rho, rep.pruned_mass);
  out.r1 = prune(classes.r1, cfg.prune_tol, next.rho, rep.pruned_mass);
  out.r2 = prune(classes.r2, cfg.prune_tol, next.rho, rep.pruned_mass);
  out.error_budget = state.error_budget + rep.tail_bound + rep.dropped_bound + rep.pruned_mass;
  rep.error_budget = out.error_budget;
  rep.terms_after = out.r0.size() + out.r1.size() + out.r2.size();

  const auto modes = lattice::truncated_modes(p.lattice.d, p.mode_radius);
  const auto shift = frequency_shift(sol.resonant1, modes);
  std::int64_t outer = 0;
  for (const auto& m : modes) outer = std::max(outer, m.norm2());
  double mean = 0.0;
  int count = 0;
  for (const auto& m : modes)
    if (m.norm2() == outer) {
      mean += shift.at(m);
      ++count;
    }
  mean /= count;
  for (const auto& [m, v] : shift) {
    rep.shift_max = std::max(rep.shift_max, std::abs(v));
    rep.hat_part[m] = v - mean;
    rep.hat_change = std::max(rep.hat_change, std::abs(v - mean));
  }
  rep.v_breve_increment = mean;

  out.nf.v_breve = state.nf.v_breve + mean;
  out.hat_shift = state.hat_shift;
  for (const auto& [m, h] : rep.hat_part) out.hat_shift[m] += h;
  out.v_star = state.v_star;
  for (int it = 0; it < 100; ++it) {
    double worst = 0.0;
    for (auto& [m, v] : out.v_star) {
      const double residual = v + out.hat_shift.at(m) - out.omega.at(m);
      worst = std::max(worst, std::abs(residual));
      v -= residual;
    }
    rep.freeze_iterations = it + 1;
    if (worst < 1e-12) break;
  }
  for (const auto& [m, v] : out.v_star) out.nf.v_hat[m] = v + out.hat_shift.at(m);

  std::vector<ham::TermEntry> magnitudes;
  for (const auto& [key, c] : f) magnitudes.emplace_back(key, std::abs(c));
  const Hamiltonian abs_f = Hamiltonian::from_entries(p, std::move(magnitudes));
  ham::StatePoint x;
  for (const auto& m : modes) x[m] = (1.0 - sched.d_s) * std::exp(-p.r * lattice::weight(m, p.lattice));
  rep.transform_proxy = ham::vf_sup_norm(abs_f, x, p.r);

  rep.after = plus_norms(out, next.rho);
  const double slack = 1e-12 * std::max(rep.shift_max, 1e-300);
  rep.flags.r0 = rep.after.r0 <= sched.eps_next;
  rep.flags.r1 = rep.after.r1 <= std::pow(sched.eps_next, 0.6);
  rep.flags.r2 = rep.after.r2 <= (1.0 + next.d_s) * eps0;
  rep.flags.transform = rep.transform_proxy <= std::pow(sched.eps, 0.5);
  rep.flags.hat_change = rep.hat_change <= std::pow(sched.eps, 0.5);
  rep.flags.shift = rep.shift_max <= std::pow(sched.eps_next, 0.55);
  bool shaped = shift_envelope_decays(rep.hat_part, slack);
  for (const auto& [m, h] : rep.hat_part)
    if (std::abs(h) * dioph::angle_norm(m) > std::pow(sched.eps_next, 0.5) + slack) shaped = false;
  rep.flags.shift_decay = shaped;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (cfg.strict && !rep.flags.all())
    throw ValidationError("step " + std::to_string(sched.s) + " bound check failed in strict mode");
  return {std::move(out), std::move(rep)};
}

namespace {
StepReport initial_report(const KamState& st, const KamConfig& cfg) {
  const double eps0 = cfg.eps0();
  const ScheduleParams s0 = schedule(0, eps0);
  StepReport rep;
  rep.initial = true;
  rep.rho = rep.rho_next = s0.rho;
  rep.eps = rep.eps_next = s0.eps;
  rep.before = rep.after = plus_norms(st, s0.rho);
  rep.flags.r0 = rep.after.r0 <= eps0;
  rep.flags.r1 = rep.after.r1 <= std::pow(eps0, 0.6);
  rep.flags.r2 = rep.after.r2 <= eps0;
  rep.error_budget = st.error_budget;
  rep.terms_after = st.r0.size() + st.r1.size() + st.r2.size();
  return rep;
}
}  // namespace

RunResult run_from(const KamConfig& cfg, const Hamiltonian& h, const StepObserver& observe) {
  cfg.validate();
  if (!(h.params() == cfg.ham_params())) throw ValidationError("Hamiltonian parameters differ from run config");
  const dioph::DiophParams dp{cfg.gamma, cfg.d, cfg.ell_budget, cfg.mode_radius};
  RunResult res;
  res.omega = dioph::sample_diophantine(dp, cfg.seed);
  res.state = initial_state(cfg, h, res.omega);
  res.initial_sup_norm = ham::sup_norm(h, constants::rho_zero());
  res.reports.push_back(initial_report(res.state, cfg));
  if (observe) observe(res.reports.back(), res.state);
  for (int s = 0; s < cfg.steps; ++s) {
    auto [next, rep] = kam_step(res.state, schedule(s, cfg.eps0()), cfg);
    res.state = std::move(next);
    res.reports.push_back(std::move(rep));
    if (observe) observe(res.reports.back(), res.state);
  }
  return res;
}

RunResult run(const KamConfig& cfg, const StepObserver& observe) {
  cfg.validate();
  nls::NlsConfig ncfg{cfg.d, cfg.mode_radius, cfg.epsilon, cfg.sign, cfg.sigma, cfg.r, cfg.floor_const, cfg.degree_cap,
                      cfg.physical_multiplicity};
  return run_from(cfg, nls::build_cubic_nls(ncfg), observe);
}

}  // namespace kamnf::kam
