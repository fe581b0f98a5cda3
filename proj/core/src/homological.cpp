#include "kamnf/homological.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kamnf/algebra.hpp"
#include "kamnf/errors.hpp"
#include "kamnf/norms.hpp"

namespace kamnf::homological {

double NormalForm::hat(const Mode& n) const {
  auto it = v_hat.find(n);
  if (it == v_hat.end()) throw ValidationError("normal form has no frequency at mode " + lattice::to_string(n));
  return it->second;
}

double NormalForm::omega(const Mode& n) const { return static_cast<double>(n.norm2()) + v_breve + hat(n); }

double divisor(const MultiIndex& k, const MultiIndex& k_bar, const NormalForm& nf) {
  std::int64_t integer = 0;
  double shift = 0.0;
  const auto ell = lattice::SignedIndex::difference(k, k_bar);
  for (const auto& [m, e] : ell.pos.entries()) {
    integer += e * m.norm2();
    shift += e * nf.hat(m);
  }
  for (const auto& [m, e] : ell.neg.entries()) {
    integer -= e * m.norm2();
    shift -= e * nf.hat(m);
  }
  const int mass = ell.pos.total() - ell.neg.total();
  return static_cast<double>(integer) + shift + mass * nf.v_breve;
}

double guard_threshold(const MultiIndex& k, const MultiIndex& k_bar, double base, int d) {
  const auto ell = lattice::SignedIndex::difference(k, k_bar);
  double g = base;
  for (const auto* part : {&ell.pos, &ell.neg})
    for (const auto& [m, e] : part->entries())
      g /= 1.0 + static_cast<double>(e) * e * e * std::pow(dioph::angle_norm(m), d + 4);
  return g;
}

double tail_weight(const TermKey& key, const lattice::LatticeParams& p) {
  const auto sys = lattice::sorted_system(key.a, key.k, key.k_bar, key.j);
  double t = 0.0;
  for (std::size_t i = 2; i < sys.size(); ++i) t += lattice::weight(sys[i], p);
  return t;
}

Hamiltonian normal_form_hamiltonian(const NormalForm& nf, const HamParams& p) {
  std::vector<ham::TermEntry> entries;
  for (const auto& m : lattice::truncated_modes(p.lattice.d, p.mode_radius))
    entries.emplace_back(TermKey{{}, MultiIndex::unit(m), MultiIndex::unit(m), {}}, nf.omega(m));
  return Hamiltonian::from_entries(p, std::move(entries));
}

namespace {

std::string describe(const TermKey& key) {
  std::ostringstream os;
  os << "k={";
  for (const auto& [m, e] : key.k.entries()) os << m << "^" << e << " ";
  os << "} k_bar={";
  for (const auto& [m, e] : key.k_bar.entries()) os << m << "^" << e << " ";
  os << "}";
  return os.str();
}

struct Split {
  std::vector<ham::TermEntry> f, resonant, deferred, eliminated;
};

Split solve_class(const Hamiltonian& r, const NormalForm& nf, const SolveOptions& opts, DivisorStats& stats) {
  Split out;
  const auto& p = r.params();
  const ham::Complex minus_i{0.0, -1.0};
  for (const auto& [key, c] : r) {
    if (key.resonant()) {
      out.resonant.emplace_back(key, c);
      ++stats.resonant;
      continue;
    }
    if (key.k.total() + key.k_bar.total() == 2) ++stats.quadratic_nonresonant;
    if (tail_weight(key, p.lattice) > opts.budget) {
      out.deferred.emplace_back(key, c);
      ++stats.deferred;
      continue;
    }
    const double div = divisor(key.k, key.k_bar, nf);
    const double guard = guard_threshold(key.k, key.k_bar, opts.guard_base, p.lattice.d);
    stats.min_divisor = std::min(stats.min_divisor, std::abs(div));
    if (guard > 0.0) stats.min_ratio_to_guard = std::min(stats.min_ratio_to_guard, std::abs(div) / guard);
    if (std::abs(div) < opts.guard_base) ++stats.below_flat_guard;
    if (!(std::abs(div) >= guard) || div == 0.0) {
      std::ostringstream os;
      os << "small divisor " << div << " below guard " << guard << " at " << describe(key);
      throw SmallDivisorError(os.str());
    }
    out.f.emplace_back(key, minus_i * c / div);
    out.eliminated.emplace_back(key, c);
    ++stats.eliminated;
  }
  return out;
}

}  // namespace

HomologicalSolution solve_homological(const Hamiltonian& r0, const Hamiltonian& r1, const NormalForm& nf,
                                      const SolveOptions& opts) {
  ham::require_same_params(r0, r1);
  if (!(opts.guard_base >= 0.0)) throw ValidationError("guard must be >= 0");
  for (const auto& [key, c] : r0)
    if (!key.j.empty() || !key.k.disjoint(key.k_bar)) throw ValidationError("R0 term outside class 0: " + describe(key));
  for (const auto& [key, c] : r1)
    if (key.j.size() != 1 || !key.k.disjoint(key.k_bar)) throw ValidationError("R1 term outside class 1: " + describe(key));

  DivisorStats stats;
  Split s0 = solve_class(r0, nf, opts, stats);
  Split s1 = solve_class(r1, nf, opts, stats);
  const auto& p = r0.params();
  auto build = [&p](std::vector<ham::TermEntry>& v) { return Hamiltonian::from_entries(p, std::move(v)); };
  HomologicalSolution sol{build(s0.f),        build(s1.f),        build(s0.resonant),   build(s1.resonant),
                          build(s0.deferred), build(s1.deferred), build(s0.eliminated), build(s1.eliminated),
                          stats};
  sol.stats.deferred_mass = ham::star_norm(linear_combine(1.0, sol.deferred0, 1.0, sol.deferred1), opts.rho);
  return sol;
}

double homological_residual(const HomologicalSolution& sol, const Hamiltonian& r0, const Hamiltonian& r1,
                            const NormalForm& nf, double rho) {
  const auto& p = r0.params();
  const Hamiltonian n = normal_form_hamiltonian(nf, p);
  const Hamiltonian f = linear_combine(1.0, sol.f0, 1.0, sol.f1);
  const Hamiltonian lhs = linear_combine(1.0, ham::poisson_bracket(n, f), 1.0,
                                         ham::expand(linear_combine(1.0, sol.eliminated0, 1.0, sol.eliminated1)));
  const double scale = ham::star_norm(linear_combine(1.0, r0, 1.0, r1), rho);
  const double res = ham::star_norm(lhs, rho);
  return scale > 0.0 ? res / scale : res;
}

}  // namespace kamnf::homological
