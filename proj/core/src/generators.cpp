#include "kamnf/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kamnf/errors.hpp"

namespace kamnf::gen {

using lattice::Mode;
using lattice::MultiIndex;

namespace {

ham::Complex disk_point(rng::Stream& st, double radius) {
  const double len = radius * std::sqrt(st.uniform());
  const double angle = 2.0 * std::numbers::pi * st.uniform();
  return std::polar(len, angle);
}

Mode pick(const std::vector<Mode>& modes, rng::Stream& st) {
  return modes[static_cast<std::size_t>(st.integer(0, static_cast<int>(modes.size()) - 1))];
}

}  // namespace

ham::Hamiltonian random_hamiltonian(const ham::HamParams& params, const HamiltonianLaw& law, rng::Stream& st) {
  params.validate();
  if (law.terms < 0 || law.min_degree < 2 || law.max_degree < law.min_degree || law.max_degree > params.degree_cap)
    throw ValidationError("random_hamiltonian: degree range must satisfy 2 <= min <= max <= degree_cap");
  const int d = params.lattice.d;
  const auto modes = lattice::truncated_modes(d, params.mode_radius);
  std::vector<ham::TermEntry> entries;
  for (int t = 0; t < law.terms; ++t) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const int degree = st.integer(law.min_degree, law.max_degree);
      if (law.mass_conserving && degree % 2 != 0) continue;
      const int actions = st.integer(0, std::min(law.max_actions, (degree - 2) / 2));
      const int free_degree = degree - 2 * actions;
      const int n_k = law.mass_conserving ? free_degree / 2 : st.integer(1, free_degree - 1);
      const int n_kb = free_degree - n_k;
      MultiIndex a;
      MultiIndex k;
      MultiIndex k_bar;
      for (int i = 0; i < actions; ++i) a.add(pick(modes, st), 1);
      Mode momentum = Mode::zero(d);
      for (int i = 0; i < n_k; ++i) {
        const Mode m = pick(modes, st);
        k.add(m, 1);
        momentum = momentum + m;
      }
      for (int i = 0; i + 1 < n_kb; ++i) {
        const Mode m = pick(modes, st);
        k_bar.add(m, 1);
        momentum = momentum - m;
      }
      if (momentum.sup() > params.mode_radius) continue;
      k_bar.add(momentum, 1);
      entries.emplace_back(ham::make_key(std::move(a), std::move(k), std::move(k_bar)),
                           disk_point(st, law.coeff_radius));
      break;
    }
  }
  return ham::Hamiltonian::from_entries(params, std::move(entries));
}

ham::StatePoint random_point(const ham::HamParams& params, double rho, double scale, rng::Stream& st) {
  ham::StatePoint x;
  for (const auto& m : lattice::truncated_modes(params.lattice.d, params.mode_radius)) {
    const double bound = scale * std::exp(-rho * lattice::weight(m, params.lattice));
    x[m] = std::polar(bound * st.uniform(), 2.0 * std::numbers::pi * st.uniform());
  }
  return x;
}

GapSample random_gap_sample(int d, int max_norm, int max_factors, rng::Stream& st) {
  if (d < 1 || d > lattice::kMaxDim || max_norm < 1 || max_factors < 2)
    throw ValidationError("random_gap_sample: need 1 <= d <= 4, max_norm >= 1, max_factors >= 2");
  auto draw_mode = [&] {
    const double scale = std::exp(st.uniform() * std::log(static_cast<double>(max_norm)));
    const int bound = std::max(1, static_cast<int>(scale));
    Mode m = Mode::zero(d);
    for (int i = 0; i < d; ++i) m.c[static_cast<std::size_t>(i)] = st.integer(-bound, bound);
    return m;
  };
  GapSample s;
  const int actions = st.integer(0, 2);
  for (int i = 0; i < actions; ++i) s.a.add(draw_mode(), 1);
  const int factors = st.integer(2, max_factors);
  const int n_k = st.integer(1, factors - 1);
  Mode momentum = Mode::zero(d);
  for (int i = 0; i < n_k; ++i) {
    const Mode m = draw_mode();
    s.k.add(m, 1);
    momentum = momentum + m;
  }
  for (int i = 0; i + 1 < factors - n_k; ++i) {
    const Mode m = draw_mode();
    s.k_bar.add(m, 1);
    momentum = momentum - m;
  }
  s.k_bar.add(momentum, 1);
  return s;
}

}  // namespace kamnf::gen
