#include <doctest.h>

#include <cmath>

#include "kamnf/algebra.hpp"
#include "kamnf/errors.hpp"
#include "kamnf/generators.hpp"
#include "kamnf/hamiltonian.hpp"
#include "kamnf/norms.hpp"

using namespace kamnf;
using namespace kamnf::ham;
using lattice::Mode;
using lattice::MultiIndex;

namespace {

HamParams small_params(int d = 1, int radius = 2, int cap = 12) {
  HamParams p;
  p.lattice.d = d;
  p.mode_radius = radius;
  p.degree_cap = cap;
  return p;
}

TermKey hop(const Mode& from, const Mode& to) { return make_key({}, MultiIndex::unit(from), MultiIndex::unit(to)); }

double relative_gap(const Hamiltonian& x, const Hamiltonian& y) {
  double scale = 0.0;
  for (const auto& [k, c] : x) scale = std::max(scale, std::abs(c));
  for (const auto& [k, c] : y) scale = std::max(scale, std::abs(c));
  return scale == 0.0 ? 0.0 : max_abs_difference(x, y) / scale;
}

Hamiltonian random_ham(const HamParams& p, rng::Stream& st, int terms = 5, int max_degree = 4) {
  gen::HamiltonianLaw law;
  law.terms = terms;
  law.max_degree = max_degree;
  return gen::random_hamiltonian(p, law, st);
}

}  // namespace

TEST_CASE("from_entries merges equal keys and drops cancellations") {
  const auto p = small_params();
  const auto key = hop(Mode{1}, Mode{1});
  const auto h = Hamiltonian::from_entries(p, {{key, {1.0, 0.0}}, {key, {0.5, 2.0}}, {hop(Mode{0}, Mode{0}), 1.0},
                                              {hop(Mode{0}, Mode{0}), -1.0}});
  REQUIRE(h.size() == 1);
  CHECK(h.coeff(key) == Complex(1.5, 2.0));
}

TEST_CASE("keys outside the mode box or above the degree cap are rejected") {
  const auto p = small_params(1, 1, 4);
  CHECK_THROWS_AS(Hamiltonian::from_entries(p, {{hop(Mode{2}, Mode{2}), 1.0}}), ValidationError);
  MultiIndex big = MultiIndex::unit(Mode{0}, 3);
  CHECK_THROWS(Hamiltonian::from_entries(p, {{make_key({}, big, big), 1.0}}));
}

TEST_CASE("bracket of two hopping terms") {
  const auto p = small_params();
  const Mode n{1};
  const Mode m{0};
  const auto x = Hamiltonian::from_entries(p, {{hop(n, m), 1.0}});
  const auto y = Hamiltonian::from_entries(p, {{hop(m, n), 1.0}});
  const auto expected =
      Hamiltonian::from_entries(p, {{hop(m, m), Complex(0.0, 1.0)}, {hop(n, n), Complex(0.0, -1.0)}});
  CHECK(max_abs_difference(poisson_bracket(x, y), expected) == 0.0);
}

TEST_CASE("bracket with a quadratic action term multiplies by the mode divisor") {
  const auto p = small_params();
  const auto action = Hamiltonian::from_entries(p, {{hop(Mode{1}, Mode{1}), 1.0}});
  const auto monomial = Hamiltonian::from_entries(p, {{hop(Mode{1}, Mode{0}), 1.0}});
  const auto br = poisson_bracket(action, monomial);
  REQUIRE(br.size() == 1);
  CHECK(std::abs(br.coeff(hop(Mode{1}, Mode{0}))) == doctest::Approx(1.0));
}

TEST_CASE("expand and collect round trip") {
  const auto p = small_params();
  rng::Stream st(3);
  for (int i = 0; i < 100; ++i) {
    const auto h = random_ham(p, st, 6, 6);
    CHECK(relative_gap(expand(collect(h)), h) <= 1e-12);
  }
}

TEST_CASE("class split recombines") {
  const auto p = small_params();
  rng::Stream st(4);
  for (int i = 0; i < 100; ++i) {
    const auto h = random_ham(p, st, 8, 6);
    const auto parts = class_split(collect(h));
    CHECK(relative_gap(expand(merge(parts)), h) <= 1e-12);
    for (const auto& [k, c] : parts.r0) CHECK(k.j.empty());
    for (const auto& [k, c] : parts.r1) CHECK(k.j.size() == 1);
  }
}

TEST_CASE("single-term norms match the closed forms") {
  const auto p = small_params();
  MultiIndex k;
  k.add(Mode{1}, 1);
  k.add(Mode{-1}, 1);
  const auto key = make_key({}, k, MultiIndex::unit(Mode{0}, 2));
  const Complex c{0.3, -0.4};
  const auto h = Hamiltonian::from_entries(p, {{key, c}});
  const double w = std::pow(std::log(1024.0), 2.5);
  const double rho = 0.01;
  CHECK(sup_norm(h, rho) == doctest::Approx(0.5 * std::exp(-rho * 2.0 * w)).epsilon(1e-12));
  CHECK(star_norm(h, rho) == doctest::Approx(0.5 * std::exp(-rho * 4.0 * w)).epsilon(1e-12));
  CHECK(sup_norm(Hamiltonian(p), rho) == 0.0);
}

TEST_CASE("star norm needs rho below r") {
  const auto p = small_params();
  const auto h = Hamiltonian::from_entries(p, {{hop(Mode{0}, Mode{0}), 1.0}});
  CHECK_THROWS_AS((void)star_norm(h, 1.5), ValidationError);
}

TEST_CASE("property: bracket antisymmetry is exact") {
  const auto p = small_params();
  rng::Stream st(21);
  for (int i = 0; i < 100; ++i) {
    const auto f = random_ham(p, st);
    const auto g = random_ham(p, st);
    CHECK(max_abs_difference(poisson_bracket(f, g), linear_combine(-1.0, poisson_bracket(g, f), 0.0, Hamiltonian(p))) ==
          0.0);
  }
}

TEST_CASE("property: Jacobi and Leibniz residuals") {
  for (int d : {1, 2}) {
    const auto p = small_params(d, d == 1 ? 2 : 1, 12);
    rng::Stream st(rng::hash({31, static_cast<std::uint64_t>(d)}));
    for (int i = 0; i < 100; ++i) {
      const auto f = random_ham(p, st, 4, 4);
      const auto g = random_ham(p, st, 4, 4);
      const auto h = random_ham(p, st, 4, 4);
      const auto jac = linear_combine(
          1.0, linear_combine(1.0, poisson_bracket(f, poisson_bracket(g, h)), 1.0, poisson_bracket(g, poisson_bracket(h, f))),
          1.0, poisson_bracket(h, poisson_bracket(f, g)));
      double scale = 1.0;
      for (const auto& x : {f, g, h})
        for (const auto& [k, c] : x) scale = std::max(scale, std::abs(c));
      CHECK(max_abs_difference(jac, Hamiltonian(p)) <= 1e-10 * scale * scale * scale);

      const auto lhs = poisson_bracket(multiply(f, g), h);
      const auto rhs = linear_combine(1.0, multiply(f, poisson_bracket(g, h)), 1.0, multiply(poisson_bracket(f, h), g));
      CHECK(relative_gap(lhs, rhs) <= 1e-10);
    }
  }
}

TEST_CASE("property: star norm is submultiplicative and monotone") {
  const auto p = small_params();
  rng::Stream st(8);
  for (int i = 0; i < 1000; ++i) {
    const auto f = random_ham(p, st);
    const auto g = random_ham(p, st);
    const double rho = st.uniform(0.0, 0.5);
    CHECK(star_norm(multiply(f, g), rho) <= star_norm(f, rho) * star_norm(g, rho) * (1.0 + 1e-12));
    CHECK(star_norm(f, rho + 0.1) <= star_norm(f, rho) * (1.0 + 1e-12));
    CHECK(sup_norm(f, rho + 0.1) <= sup_norm(f, rho) * (1.0 + 1e-12));
  }
}

TEST_CASE("property: random Hamiltonians conserve mass and momentum and stay real-symmetric under bracket") {
  const auto p = small_params(2, 1);
  rng::Stream st(9);
  for (int i = 0; i < 200; ++i) {
    const auto f = random_ham(p, st);
    for (const auto& [k, c] : f) {
      const auto cons = lattice::conservation_check(k.k, k.k_bar, 2);
      CHECK(cons.mass);
      CHECK(cons.momentum);
    }
    const auto g = random_ham(p, st);
    for (const auto& [k, c] : poisson_bracket(f, g)) {
      const auto cons = lattice::conservation_check(k.k, k.k_bar, 2);
      CHECK(cons.mass);
      CHECK(cons.momentum);
    }
  }
}

TEST_CASE("vector field of a quadratic action") {
  const auto p = small_params();
  const auto h = Hamiltonian::from_entries(p, {{hop(Mode{1}, Mode{1}), 2.0}});
  StatePoint x;
  x[Mode{1}] = Complex(0.5, 0.0);
  const auto field = vector_field(h, x);
  REQUIRE(field.count(Mode{1}) == 1);
  CHECK(field.at(Mode{1}).dq.imag() == doctest::Approx(1.0));
  CHECK(field.at(Mode{1}).dq_bar.imag() == doctest::Approx(-1.0));
}
