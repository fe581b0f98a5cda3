#include "kamnf/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "kamnf/algebra.hpp"
#include "kamnf/errors.hpp"
#include "kamnf/norms.hpp"

namespace kamnf::kam {

std::string_view family_name(TlFamily f) {
  switch (f) {
    case TlFamily::qq: return "qq";
    case TlFamily::q_qbar: return "qqbar";
    case TlFamily::qbar_qbar: return "qbarqbar";
  }
  return "?";
}

namespace {
struct Shifted {
  lattice::Mode first;
  lattice::Mode second;
  bool conj_first;
  bool conj_second;
};

Shifted shifted(TlFamily f, const lattice::Mode& n, const lattice::Mode& m, const lattice::Mode& l, int t) {
  const lattice::Mode a = n + t * l;
  switch (f) {
    case TlFamily::qq: return {a, m - t * l, false, false};
    case TlFamily::q_qbar: return {a, m + t * l, false, true};
    case TlFamily::qbar_qbar: return {a, m - t * l, true, true};
  }
  throw ValidationError("unknown family");
}

bool inside(const ham::HamParams& p, const Shifted& s) {
  return s.first.sup() <= p.mode_radius && s.second.sup() <= p.mode_radius;
}

constexpr TlFamily kFamilies[] = {TlFamily::qq, TlFamily::q_qbar, TlFamily::qbar_qbar};
}  // namespace

ham::Hamiltonian tl_derivative(const ham::Hamiltonian& h, TlFamily f, const lattice::Mode& n, const lattice::Mode& m,
                               const lattice::Mode& l, int t) {
  const Shifted s = shifted(f, n, m, l, t);
  if (!inside(h.params(), s))
    throw ValidationError("shift t=" + std::to_string(t) + " leaves the mode radius at " + lattice::to_string(s.first) +
                          " / " + lattice::to_string(s.second));
  return ham::second_partial(h, s.first, s.second, s.conj_first, s.conj_second);
}

std::vector<int> feasible_shifts(const ham::HamParams& p, const lattice::Mode& n, const lattice::Mode& m,
                                 const lattice::Mode& l, int t_cap) {
  std::vector<int> out;
  for (int t = -t_cap; t <= t_cap; ++t) {
    if (t == 0) continue;
    bool ok = true;
    for (auto f : kFamilies) ok = ok && inside(p, shifted(f, n, m, l, t));
    if (ok) out.push_back(t);
  }
  return out;
}

TlTable tl_defect(const ham::Hamiltonian& h, const lattice::Mode& n, const lattice::Mode& m, const lattice::Mode& l,
                  std::span<const int> t_list, double rho) {
  if (t_list.empty()) throw ValidationError("t_list is empty");
  if (l.is_zero()) throw ValidationError("direction l must be nonzero");
  for (int t : t_list)
    if (t == 0) throw ValidationError("t = 0 is not allowed");
  TlTable table;
  table.t_limit = *std::max_element(t_list.begin(), t_list.end(),
                                    [](int x, int y) { return std::abs(x) < std::abs(y) || (std::abs(x) == std::abs(y) && x < y); });
  std::vector<int> order(t_list.begin(), t_list.end());
  std::stable_sort(order.begin(), order.end(), [](int x, int y) { return std::abs(x) < std::abs(y); });

  const ham::Hamiltonian ex = ham::expand(h);
  for (std::size_t fi = 0; fi < 3; ++fi) {
    const TlFamily f = kFamilies[fi];
    const auto limit = tl_derivative(ex, f, n, m, l, table.t_limit);
    double num = 0.0;
    double den = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    double group_max = 0.0;
    int group = 0;
    for (int t : order) {
      if (std::abs(t) != group) {
        if (group != 0) previous = group_max;
        group = std::abs(t);
        group_max = 0.0;
      }
      const auto dt = tl_derivative(ex, f, n, m, l, t);
      const double defect = ham::star_norm(linear_combine(1.0, dt, -1.0, limit), rho);
      table.rows.push_back({f, t, defect});
      group_max = std::max(group_max, defect);
      if (defect > previous) table.non_increasing[fi] = false;
      if (t != table.t_limit) {
        const double inv = 1.0 / std::abs(t);
        num += defect * inv;
        den += inv * inv;
      }
    }
    table.fitted_c[fi] = den > 0.0 ? num / den : 0.0;
  }
  return table;
}

}  // namespace kamnf::kam
