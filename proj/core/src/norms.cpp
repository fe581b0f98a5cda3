#include "kamnf/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kamnf/algebra.hpp"
#include "kamnf/errors.hpp"

namespace kamnf::ham {

NormKind parse_norm_kind(std::string_view name) {
  if (name == "sup" || name == "sup_rho") return NormKind::sup_rho;
  if (name == "star" || name == "star_rho") return NormKind::star_rho;
  if (name == "plus" || name == "plus_rho") return NormKind::plus_rho;
  throw ValidationError("unknown norm kind: " + std::string(name));
}

double sup_exponent(const TermKey& key, const LatticeParams& p) {
  double total = 0.0;
  double top = 0.0;
  auto visit = [&](const Mode& m, int mult) {
    const double w = lattice::weight(m, p);
    total += mult * w;
    top = std::max(top, w);
  };
  for (const auto& [m, e] : key.a.entries()) visit(m, 2 * e);
  for (const auto& [m, e] : key.k.entries()) visit(m, e);
  for (const auto& [m, e] : key.k_bar.entries()) visit(m, e);
  for (const auto& m : key.j) visit(m, 2);
  return total - 2.0 * top;
}

double star_weight(const TermKey& key, const HamParams& p, double rho) {
  double action = 0.0;
  double field = 0.0;
  for (const auto& [m, e] : key.a.entries()) action += e * lattice::weight(m, p.lattice);
  for (const auto& [m, e] : key.k.entries()) field += e * lattice::weight(m, p.lattice);
  for (const auto& [m, e] : key.k_bar.entries()) field += e * lattice::weight(m, p.lattice);
  return std::exp(-2.0 * p.r * action - rho * field);
}

namespace {
void require_rho(double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw ValidationError("rho must be finite and >= 0, got " + std::to_string(rho));
}

double sup_over(const Hamiltonian& h, double rho) {
  double best = 0.0;
  for (const auto& [key, c] : h)
    best = std::max(best, std::abs(c) * std::exp(-rho * sup_exponent(key, h.params().lattice)));
  return best;
}

bool has_j(const Hamiltonian& h) {
  return std::any_of(h.begin(), h.end(), [](const auto& t) { return !t.first.j.empty(); });
}
}  // namespace

double sup_norm(const Hamiltonian& h, double rho) {
  require_rho(rho);
  return has_j(h) ? sup_over(expand(h), rho) : sup_over(h, rho);
}

double star_norm(const Hamiltonian& h, double rho) {
  require_rho(rho);
  if (!(rho < h.params().r))
    throw ValidationError("star norm needs rho < r, got rho=" + std::to_string(rho));
  const Hamiltonian ex = has_j(h) ? expand(h) : h;
  double sum = 0.0;
  for (const auto& [key, c] : ex) sum += std::abs(c) * star_weight(key, ex.params(), rho);
  return sum;
}

double plus_norm(const Hamiltonian& h, double rho) {
  require_rho(rho);
  return sup_over(canonicalize(h, Representation::j_collected), rho);
}

double norm(const Hamiltonian& h, NormKind kind, double rho) {
  switch (kind) {
    case NormKind::sup_rho: return sup_norm(h, rho);
    case NormKind::star_rho: return star_norm(h, rho);
    case NormKind::plus_rho: return plus_norm(h, rho);
  }
  throw ValidationError("unknown norm kind");
}

}  // namespace kamnf::ham
