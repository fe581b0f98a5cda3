#include "kamnf/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kamnf/errors.hpp"

namespace kamnf::ham {

int TermKey::sup_radius() const {
  int s = 0;
  for (const auto* idx : {&a, &k, &k_bar})
    for (const auto& [m, e] : idx->entries()) s = std::max(s, m.sup());
  for (const auto& m : j) s = std::max(s, m.sup());
  return s;
}

TermKey make_key(MultiIndex a, MultiIndex k, MultiIndex k_bar, std::vector<Mode> j) {
  if (j.size() > 2) throw ValidationError("at most two J-modes per term");
  std::sort(j.begin(), j.end());
  return {std::move(a), std::move(k), std::move(k_bar), std::move(j)};
}

void HamParams::validate() const {
  lattice.validate();
  if (!(r >= 1.0)) throw ValidationError("r must be >= 1, got " + std::to_string(r));
  if (degree_cap < 2) throw ValidationError("degree_cap must be >= 2, got " + std::to_string(degree_cap));
  if (mode_radius < 0) throw ValidationError("mode_radius must be >= 0, got " + std::to_string(mode_radius));
}

Hamiltonian::Hamiltonian(HamParams params) : params_(params) { params_.validate(); }

void Hamiltonian::check_key(const TermKey& key) const {
  if (key.j.size() > 2) throw ValidationError("at most two J-modes per term");
  if (!std::is_sorted(key.j.begin(), key.j.end())) throw ValidationError("J-modes must be sorted");
  if (key.degree() > params_.degree_cap)
    throw CapacityError("term degree " + std::to_string(key.degree()) + " exceeds degree_cap " +
                        std::to_string(params_.degree_cap));
  if (key.sup_radius() > params_.mode_radius)
    throw ValidationError("term mode outside radius " + std::to_string(params_.mode_radius));
  const int d = params_.lattice.d;
  for (const auto* idx : {&key.a, &key.k, &key.k_bar})
    for (const auto& [m, e] : idx->entries())
      if (m.dim != d) throw ValidationError("term mode " + lattice::to_string(m) + " has wrong dimension");
  for (const auto& m : key.j)
    if (m.dim != d) throw ValidationError("J-mode " + lattice::to_string(m) + " has wrong dimension");
}

Hamiltonian Hamiltonian::from_entries(HamParams params, std::vector<TermEntry> entries, bool enforce_caps) {
  Hamiltonian h(params);
  std::stable_sort(entries.begin(), entries.end(),
                   [](const TermEntry& x, const TermEntry& y) { return x.first < y.first; });
  auto hint = h.terms_.end();
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t e = i;
    Complex sum{0.0, 0.0};
    while (e < entries.size() && entries[e].first == entries[i].first) sum += entries[e++].second;
    if (std::abs(sum) >= kZeroCoeff) {
      if (enforce_caps) h.check_key(entries[i].first);
      hint = h.terms_.emplace_hint(hint, std::move(entries[i].first), sum);
      ++hint;
    }
    i = e;
  }
  return h;
}

Complex Hamiltonian::coeff(const TermKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Complex{} : it->second;
}

int Hamiltonian::max_degree() const {
  int m = 0;
  for (const auto& [key, c] : terms_) m = std::max(m, key.degree());
  return m;
}

void Hamiltonian::add(const TermKey& key, Complex c) {
  check_key(key);
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kZeroCoeff) terms_.erase(it);
}

void require_same_params(const Hamiltonian& x, const Hamiltonian& y) {
  if (!(x.params() == y.params())) throw ValidationError("Hamiltonian parameter mismatch");
}

Hamiltonian linear_combine(Complex c1, const Hamiltonian& h1, Complex c2, const Hamiltonian& h2) {
  require_same_params(h1, h2);
  std::vector<TermEntry> entries;
  entries.reserve(h1.size() + h2.size());
  for (const auto& [key, c] : h1) entries.emplace_back(key, c1 * c);
  for (const auto& [key, c] : h2) entries.emplace_back(key, c2 * c);
  auto out = Hamiltonian::from_entries(h1.params(), std::move(entries), false);
  out.set_error(std::abs(c1) * h1.error_budget() + std::abs(c2) * h2.error_budget());
  return out;
}

double reality_defect(const Hamiltonian& h) {
  double worst = 0.0;
  for (const auto& [key, c] : h) worst = std::max(worst, std::abs(c - std::conj(h.coeff(key.conjugate()))));
  return worst;
}

double max_abs_difference(const Hamiltonian& h1, const Hamiltonian& h2) {
  double worst = 0.0;
  for (const auto& [key, c] : h1) worst = std::max(worst, std::abs(c - h2.coeff(key)));
  for (const auto& [key, c] : h2)
    if (!h1.terms().contains(key)) worst = std::max(worst, std::abs(c));
  return worst;
}

}  // namespace kamnf::ham
