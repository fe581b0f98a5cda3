#include <algorithm>
#include <cmath>

#include "kamnf/algebra.hpp"
#include "kamnf/constants.hpp"
#include "kamnf/errors.hpp"
#include "kamnf/generators.hpp"
#include "kamnf/lie.hpp"
#include "kamnf/norms.hpp"
#include "verify_detail.hpp"

namespace kamnf::verify {

using detail::draw;
using detail::draw_int;
using detail::fixed;
using detail::log_margin;
using detail::Outcome;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ham::HamParams ham_params(const ParamMap& p) {
  ham::HamParams hp;
  hp.lattice = {static_cast<int>(fixed(p, "d")), fixed(p, "sigma"), fixed(p, "floor")};
  hp.r = fixed(p, "r");
  hp.degree_cap = static_cast<int>(fixed(p, "degree_cap"));
  hp.mode_radius = static_cast<int>(fixed(p, "radius"));
  hp.validate();
  return hp;
}

gen::HamiltonianLaw law(const ParamMap& p, int max_degree) {
  gen::HamiltonianLaw l;
  l.terms = static_cast<int>(fixed(p, "terms"));
  l.max_degree = max_degree;
  return l;
}

int max_degree(const ParamMap& p) { return static_cast<int>(fixed(p, "max_degree")); }

double slack(double log_rhs) { return 1e-12 * (1.0 + std::abs(log_rhs)); }

Outcome monotonicity(const ParamMap& p, rng::Stream& st) {
  const auto hp = ham_params(p);
  const double rho = draw(p, "rho", st);
  const double delta = draw(p, "delta", st);
  const auto h = gen::random_hamiltonian(hp, law(p, max_degree(p)), st);
  return {log_margin(ham::star_norm(h, rho + delta), 0.0, ham::star_norm(h, rho)), 1e-12};
}

Outcome submultiplicativity(const ParamMap& p, rng::Stream& st) {
  const auto hp = ham_params(p);
  const double rho = draw(p, "rho", st);
  const int half = std::min(max_degree(p), hp.degree_cap / 2);
  const auto f = gen::random_hamiltonian(hp, law(p, half), st);
  const auto g = gen::random_hamiltonian(hp, law(p, half), st);
  const double rhs = ham::star_norm(f, rho) * ham::star_norm(g, rho);
  return {log_margin(ham::star_norm(ham::multiply(f, g), rho), 0.0, rhs), 1e-12};
}

Outcome transfer_to_plus(const ParamMap& p, rng::Stream& st) {
  const auto hp = ham_params(p);
  const double rho = draw(p, "rho", st);
  const double delta = draw(p, "delta", st);
  const auto h = gen::random_hamiltonian(hp, law(p, max_degree(p)), st);
  const double log_c = constants::log_transfer_to_plus(hp.lattice.d, hp.lattice.sigma, delta);
  return {log_margin(ham::plus_norm(h, rho + delta), log_c, ham::sup_norm(h, rho)), slack(log_c)};
}

Outcome transfer_from_plus(const ParamMap& p, rng::Stream& st) {
  const auto hp = ham_params(p);
  const double rho = draw(p, "rho", st);
  const double delta = draw(p, "delta", st);
  const auto h = gen::random_hamiltonian(hp, law(p, max_degree(p)), st);
  const double log_c = constants::log_transfer_from_plus(delta);
  return {log_margin(ham::sup_norm(h, rho + delta), log_c, ham::plus_norm(h, rho)), slack(log_c)};
}

Outcome bracket(const ParamMap& p, rng::Stream& st) {
  const auto hp = ham_params(p);
  const double rho = draw(p, "rho", st);
  const double d1 = draw(p, "delta1", st);
  const double d2 = draw(p, "delta2", st);
  const int deg = std::min(max_degree(p), (hp.degree_cap + 2) / 2);
  const auto f = gen::random_hamiltonian(hp, law(p, deg), st);
  const auto g = gen::random_hamiltonian(hp, law(p, deg), st);
  const double log_c = constants::log_bracket(hp.lattice.d, hp.lattice.sigma, d1, d2);
  const double rhs = ham::sup_norm(f, rho - d1) * ham::sup_norm(g, rho - d2);
  return {log_margin(ham::sup_norm(ham::poisson_bracket(f, g), rho), log_c, rhs), slack(log_c)};
}

Outcome vector_field(const ParamMap& p, rng::Stream& st) {
  const auto hp = ham_params(p);
  const double rho = draw(p, "rho", st);
  const double delta = draw(p, "delta", st);
  const auto h = gen::random_hamiltonian(hp, law(p, max_degree(p)), st);
  const double index = rho + delta;
  double lhs = ham::vf_sup_norm(h, ham::weighted_point(hp, index, 1.0), index);
  const int points = static_cast<int>(fixed(p, "points"));
  for (int i = 0; i < points; ++i) lhs = std::max(lhs, ham::vf_sup_norm(h, gen::random_point(hp, index, 1.0, st), index));
  const double log_c = constants::log_vector_field(hp.lattice.d, hp.lattice.sigma, delta);
  return {log_margin(lhs, log_c, ham::sup_norm(h, rho)), slack(log_c)};
}

Outcome second_derivative(const ParamMap& p, rng::Stream& st) {
  const auto hp = ham_params(p);
  const double rho = draw(p, "rho", st);
  const double delta = draw(p, "delta", st);
  const auto h = gen::random_hamiltonian(hp, law(p, max_degree(p)), st);
  std::vector<std::pair<ham::Mode, bool>> factors;
  if (!h.empty()) {
    auto it = h.begin();
    std::advance(it, st.integer(0, static_cast<int>(h.size()) - 1));
    for (const auto& [m, e] : it->first.k.entries())
      for (int i = 0; i < e; ++i) factors.emplace_back(m, false);
    for (const auto& [m, e] : it->first.k_bar.entries())
      for (int i = 0; i < e; ++i) factors.emplace_back(m, true);
  }
  if (factors.size() < 2) return {detail::kNegInf, 0.0};
  const int i = st.integer(0, static_cast<int>(factors.size()) - 1);
  int j = st.integer(0, static_cast<int>(factors.size()) - 2);
  if (j >= i) ++j;
  const auto& [m, cm] = factors[static_cast<std::size_t>(i)];
  const auto& [l, cl] = factors[static_cast<std::size_t>(j)];
  const auto d2 = ham::second_partial(h, m, l, cm, cl);
  const double log_c = constants::log_second_derivative(hp.lattice.d, hp.lattice.sigma, delta);
  return {log_margin(ham::star_norm(d2, rho + delta), log_c, ham::sup_norm(h, rho)), slack(log_c)};
}

Outcome flow(const ParamMap& p, rng::Stream& st) {
  const auto hp = ham_params(p);
  const double rho = draw(p, "rho", st);
  const double delta = draw(p, "delta", st);
  const auto h = gen::random_hamiltonian(hp, law(p, max_degree(p)), st);
  auto f_law = law(p, max_degree(p));
  f_law.coeff_radius = fixed(p, "f_scale");
  const auto f = gen::random_hamiltonian(hp, f_law, st);
  ham::LieOptions opts;
  opts.order_cap = static_cast<int>(fixed(p, "order_cap"));
  opts.rho = std::min(rho, hp.r * 0.999);
  opts.truncate = true;
  const auto moved = ham::lie_transform(h, f, opts);
  const int d = hp.lattice.d;
  const double sigma = hp.lattice.sigma;
  const double f_norm = ham::sup_norm(f, rho - delta);
  const double log_rhs = constants::log_flow_bound(d, sigma, delta, f_norm, ham::sup_norm(h, rho - delta));
  const double lhs = ham::sup_norm(moved.value, rho);
  const double margin = lhs > 0.0 ? std::log(lhs) - log_rhs : -kInf;
  return {log_rhs == kInf ? -kInf : margin, slack(log_rhs), constants::flow_smallness(d, sigma, delta, f_norm)};
}

Outcome gap(const ParamMap& p, rng::Stream& st) {
  const lattice::LatticeParams lp{static_cast<int>(fixed(p, "d")), draw(p, "sigma", st), fixed(p, "floor")};
  const auto s = gen::random_gap_sample(lp.d, static_cast<int>(fixed(p, "max_norm")),
                                        static_cast<int>(fixed(p, "max_factors")), st);
  double total = 0.0;
  for (const auto& m : lattice::sorted_system(s.a, s.k, s.k_bar)) total += lattice::weight(m, lp);
  const double g = lattice::momentum_gap(s.a, s.k, s.k_bar, lp);
  return {-g, 1e-12 * std::max(1.0, total)};
}

void check_ham(const ParamMap& p) {
  ham_params(p);
  detail::require_in(p, "rho", 0.0, kInf, false, true);
  if (p.contains("delta") || p.contains("delta_lo")) detail::require_in(p, "delta", 0.0, 1.0, true, true);
  if (fixed(p, "max_degree") < 2 || fixed(p, "terms") < 0) throw ValidationError("max_degree >= 2 and terms >= 0 required");
}

double upper(const ParamMap& p, const std::string& key) {
  if (auto it = p.find(key); it != p.end()) return it->second;
  return p.at(key + "_hi");
}
double lower(const ParamMap& p, const std::string& key) {
  if (auto it = p.find(key); it != p.end()) return it->second;
  return p.at(key + "_lo");
}

// Star norms need rho + delta < r.
void check_below_r(const ParamMap& p) {
  check_ham(p);
  if (!(upper(p, "rho") + upper(p, "delta") < fixed(p, "r"))) throw ValidationError("need rho + delta < r");
}

void check_small_delta(const ParamMap& p, const std::string& key) {
  const double cap = std::min(lower(p, "rho") / 4.0, constants::rho_ceiling());
  if (!(lower(p, key) > 0.0 && upper(p, key) < cap))
    throw ValidationError(key + " must lie in (0, min(rho/4, 3 - 2 sqrt 2))");
}

ParamMap ham_defaults(ParamMap extra) {
  ParamMap base{{"d", 1.0},     {"sigma", 2.5},    {"r", 1.0},         {"floor", 1024.0}, {"radius", 2.0},
                {"terms", 6.0}, {"max_degree", 4.0}, {"degree_cap", 8.0}, {"rho", 0.4}};
  for (auto& [k, v] : extra) base[k] = v;
  return base;
}

}  // namespace

namespace detail {

const std::vector<Registered>& norm_registry() {
  static const std::vector<Registered> registry = [] {
    std::vector<Registered> r;
    r.push_back({"norm_monotonicity", ham_defaults({{"delta", 0.1}}), check_below_r, monotonicity});
    r.push_back({"submultiplicativity", ham_defaults({}), check_ham, submultiplicativity});
    r.push_back({"transfer_to_plus", ham_defaults({{"delta", 0.1}}), check_below_r, transfer_to_plus});
    r.push_back({"transfer_from_plus", ham_defaults({{"delta", 0.1}}), check_below_r, transfer_from_plus});
    r.push_back({"bracket", ham_defaults({{"delta1", 0.09}, {"delta2", 0.09}}),
                 [](const ParamMap& p) {
                   check_ham(p);
                   check_small_delta(p, "delta1");
                   check_small_delta(p, "delta2");
                 },
                 bracket});
    r.push_back({"vector_field", ham_defaults({{"delta", 0.1}, {"points", 4.0}}), check_below_r, vector_field});
    r.push_back({"second_derivative", ham_defaults({{"delta", 0.1}}), check_below_r, second_derivative});
    r.push_back({"flow", ham_defaults({{"delta", 0.09}, {"f_scale", 1e-3}, {"order_cap", 4.0}}),
                 [](const ParamMap& p) {
                   check_ham(p);
                   check_small_delta(p, "delta");
                 },
                 flow});
    r.push_back({"gap",
                 {{"d", 1.0}, {"sigma", 2.5}, {"floor", 1024.0}, {"max_norm", 8192.0}, {"max_factors", 8.0}},
                 [](const ParamMap& p) {
                   require_in(p, "sigma", 2.0, kInf, true, true);
                   require_in(p, "d", 1.0, lattice::kMaxDim, false, false);
                   require_in(p, "floor", 21.0, kInf, false, true);
                   require_in(p, "max_norm", 1.0, 1e6, false, false);
                   require_in(p, "max_factors", 2.0, 64.0, false, false);
                 },
                 gap});
    return r;
  }();
  return registry;
}

}  // namespace detail

std::vector<LemmaSpec> default_norm_suite() {
  return {
      {"norm_monotonicity", {}, 1000},  {"submultiplicativity", {}, 1000}, {"transfer_to_plus", {}, 1000},
      {"transfer_from_plus", {}, 1000}, {"bracket", {}, 200},              {"vector_field", {}, 200},
      {"second_derivative", {}, 200},   {"flow", {}, 200},                 {"gap", {}, 100000},
  };
}

}  // namespace kamnf::verify
