#include <doctest.h>

#include <cmath>

#include "kamnf/algebra.hpp"
#include "kamnf/errors.hpp"
#include "kamnf/generators.hpp"
#include "kamnf/homological.hpp"
#include "kamnf/norms.hpp"

using namespace kamnf;
using namespace kamnf::homological;
using lattice::Mode;

namespace {

HamParams params_1d() {
  HamParams p;
  p.mode_radius = 2;
  return p;
}

NormalForm flat_nf(const HamParams& p, double breve = 0.0) {
  NormalForm nf;
  nf.v_breve = breve;
  for (const auto& m : lattice::truncated_modes(p.lattice.d, p.mode_radius)) nf.v_hat[m] = 0.0;
  return nf;
}

NormalForm random_nf(const HamParams& p, rng::Stream& st) {
  NormalForm nf;
  nf.v_breve = st.uniform();
  for (const auto& m : lattice::truncated_modes(p.lattice.d, p.mode_radius))
    nf.v_hat[m] = st.uniform() / dioph::angle_norm(m);
  return nf;
}

MultiIndex pair(const Mode& x, const Mode& y) {
  MultiIndex out;
  out.add(x, 1);
  out.add(y, 1);
  return out;
}

}  // namespace

TEST_CASE("divisor by hand") {
  const auto p = params_1d();
  const auto nf = flat_nf(p);
  CHECK(divisor(pair(Mode{1}, Mode{-1}), MultiIndex::unit(Mode{0}, 2), nf) == doctest::Approx(2.0));
  CHECK(divisor(pair(Mode{1}, Mode{2}), pair(Mode{1}, Mode{2}), nf) == 0.0);
}

TEST_CASE("property: constant shift cancels on mass-conserving pairs") {
  const auto p = params_1d();
  rng::Stream st(12);
  const auto modes = lattice::truncated_modes(1, 2);
  auto nf = random_nf(p, st);
  for (int i = 0; i < 1000; ++i) {
    MultiIndex k;
    MultiIndex k_bar;
    const int n = st.integer(1, 3);
    for (int j = 0; j < n; ++j) {
      k.add(modes[static_cast<std::size_t>(st.integer(0, 4))], 1);
      k_bar.add(modes[static_cast<std::size_t>(st.integer(0, 4))], 1);
    }
    nf.v_breve = 0.0;
    const double base = divisor(k, k_bar, nf);
    nf.v_breve = 5.0;
    CHECK(divisor(k, k_bar, nf) == doctest::Approx(base).epsilon(1e-14));
  }
}

TEST_CASE("resonant-only input goes straight to the normal form") {
  const auto p = params_1d();
  const auto r0 = Hamiltonian::from_entries(
      p, {{ham::make_key(MultiIndex::unit(Mode{1}), {}, {}), 0.25}, {ham::make_key(pair(Mode{0}, Mode{2}), {}, {}), 1.0}});
  const auto sol = solve_homological(r0, Hamiltonian(p), flat_nf(p), {1e-6, 1e9, 0.0});
  CHECK(sol.f0.empty());
  CHECK(ham::max_abs_difference(sol.resonant0, r0) == 0.0);
}

TEST_CASE("one nonresonant term with divisor two") {
  const auto p = params_1d();
  const ham::Complex c{0.6, 0.8};
  const auto key = ham::make_key({}, pair(Mode{1}, Mode{-1}), MultiIndex::unit(Mode{0}, 2));
  const auto r0 = Hamiltonian::from_entries(p, {{key, c}});
  const auto sol = solve_homological(r0, Hamiltonian(p), flat_nf(p), {1e-6, 1e9, 0.0});
  REQUIRE(sol.f0.size() == 1);
  CHECK(std::abs(sol.f0.coeff(key)) == doctest::Approx(0.5));
  CHECK(homological_residual(sol, r0, Hamiltonian(p), flat_nf(p), 0.01) <= 1e-14);
}

TEST_CASE("zero divisor on a nonresonant key raises a small-divisor error") {
  HamParams p = params_1d();
  p.mode_radius = 3;
  const auto key = ham::make_key({}, pair(Mode{3}, Mode{-2}), pair(Mode{2}, Mode{-1}));
  const auto r0 = Hamiltonian::from_entries(p, {{key, 1.0}});
  CHECK(divisor(key.k, key.k_bar, flat_nf(p)) == 8.0);
  NormalForm nf = flat_nf(p);
  nf.v_hat[Mode{3}] = -8.0;
  CHECK_THROWS_AS(solve_homological(r0, Hamiltonian(p), nf, {1e-6, 1e9, 0.0}), SmallDivisorError);
}

TEST_CASE("property: residual identity and conservation on random remainders") {
  for (int d : {1, 2}) {
    HamParams p;
    p.lattice.d = d;
    p.mode_radius = d == 1 ? 2 : 1;
    rng::Stream st(rng::hash({77, static_cast<std::uint64_t>(d)}));
    gen::HamiltonianLaw law;
    law.terms = 10;
    law.max_degree = 6;
    int resonant_draws = 0;
    for (int i = 0; i < 100; ++i) {
      const auto nf = random_nf(p, st);
      const auto parts = ham::class_split(ham::collect(gen::random_hamiltonian(p, law, st)));
      try {
        const auto sol = solve_homological(parts.r0, parts.r1, nf, {1e-9, 1e9, 0.1});
        CHECK(homological_residual(sol, parts.r0, parts.r1, nf, 0.1) <= 1e-10);
        for (const auto* f : {&sol.f0, &sol.f1})
          for (const auto& [k, c] : ham::expand(*f)) {
            const auto cons = lattice::conservation_check(k.k, k.k_bar, d);
            CHECK(cons.mass);
            CHECK(cons.momentum);
            CHECK_FALSE(k.resonant());
          }
        for (const auto& [k, c] : sol.resonant0) CHECK(k.resonant());
      } catch (const SmallDivisorError&) {
        ++resonant_draws;
      }
    }
    CHECK(resonant_draws < 10);
  }
}

TEST_CASE("deferred terms are kept, not discarded") {
  const auto p = params_1d();
  const auto key = ham::make_key({}, pair(Mode{1}, Mode{-1}), MultiIndex::unit(Mode{0}, 2));
  const auto r0 = Hamiltonian::from_entries(p, {{key, 1.0}});
  const auto sol = solve_homological(r0, Hamiltonian(p), flat_nf(p), {1e-6, 0.0, 0.01});
  CHECK(sol.f0.empty());
  CHECK(sol.stats.deferred == 1);
  CHECK(ham::max_abs_difference(sol.deferred0, r0) == 0.0);
}
