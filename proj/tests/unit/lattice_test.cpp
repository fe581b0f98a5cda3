#include <doctest.h>

#include <cmath>

#include "kamnf/errors.hpp"
#include "kamnf/generators.hpp"
#include "kamnf/lattice.hpp"
#include "kamnf/rng.hpp"

using namespace kamnf;
using namespace kamnf::lattice;

TEST_CASE("mode norms use the floor constant below it") {
  const LatticeParams p{2, 2.5, 1024.0};
  const auto norms = mode_norms(Mode{3, 4}, p);
  CHECK(norms.euclid == doctest::Approx(5.0));
  CHECK(norms.angle == doctest::Approx(5.0));
  CHECK(norms.floor == 1024.0);
  CHECK(mode_norms(Mode{0, 0}, p).angle == 1.0);
  CHECK(mode_norms(Mode{3000, 4000}, p).floor == doctest::Approx(5000.0));
}

TEST_CASE("weight of a mode below the floor") {
  const LatticeParams p{2, 2.5, 1024.0};
  CHECK(weight(Mode{1, 0}, p) == doctest::Approx(126.49217278438272).epsilon(1e-13));
}

TEST_CASE("sorted system orders by descending norm") {
  MultiIndex k;
  k.add(Mode{3, 4}, 1);
  k.add(Mode{0, 1}, 1);
  const auto sys = sorted_system(MultiIndex{}, k, MultiIndex{});
  REQUIRE(sys.size() == 2);
  CHECK(sys[0] == Mode{3, 4});
  CHECK(sys[1] == Mode{0, 1});

  const std::vector<Mode> jmodes{Mode{2, 0}};
  const auto with_j = sorted_system(MultiIndex{}, MultiIndex{}, MultiIndex{}, jmodes);
  REQUIRE(with_j.size() == 2);
  CHECK(with_j[0] == Mode{2, 0});
  CHECK(with_j[1] == Mode{2, 0});
}

TEST_CASE("sorted system counts actions twice") {
  const auto sys = sorted_system(MultiIndex::unit(Mode{1}), MultiIndex::unit(Mode{2}), MultiIndex::unit(Mode{2}));
  CHECK(sys.size() == 4);
}

TEST_CASE("multi-index arithmetic drops zero entries") {
  MultiIndex m;
  m.add(Mode{1}, 2);
  m.add(Mode{1}, -2);
  CHECK(m.empty());
  m.add(Mode{-1}, 3);
  CHECK(m.get(Mode{-1}) == 3);
  CHECK(m.total() == 3);
  const auto ell = SignedIndex::difference(MultiIndex::unit(Mode{1}, 2), MultiIndex::unit(Mode{1}));
  CHECK(ell.get(Mode{1}) == 1);
  CHECK(ell.neg.empty());
}

TEST_CASE("gap of a symmetric conserving monomial") {
  const LatticeParams p{1, 2.5, 1024.0};
  MultiIndex k;
  k.add(Mode{1}, 1);
  k.add(Mode{-1}, 1);
  const auto k_bar = MultiIndex::unit(Mode{0}, 2);
  const double w = std::pow(std::log(1024.0), 2.5);
  CHECK(momentum_gap(MultiIndex{}, k, k_bar, p) == doctest::Approx(w).epsilon(1e-12));
}

TEST_CASE("gap rejects momentum violation") {
  const LatticeParams p{1, 2.5, 1024.0};
  CHECK_THROWS_AS(momentum_gap(MultiIndex{}, MultiIndex::unit(Mode{1}), MultiIndex::unit(Mode{2}), p),
                  ValidationError);
}

TEST_CASE("conservation checks") {
  MultiIndex k;
  k.add(Mode{1}, 1);
  k.add(Mode{-1}, 1);
  const auto ok = conservation_check(k, MultiIndex::unit(Mode{0}, 2), 1);
  CHECK(ok.mass);
  CHECK(ok.momentum);
  const auto bad = conservation_check(MultiIndex::unit(Mode{1}), MultiIndex::unit(Mode{2}), 1);
  CHECK(bad.mass);
  CHECK_FALSE(bad.momentum);
  CHECK(mass_defect(MultiIndex::unit(Mode{1}, 3), MultiIndex::unit(Mode{0})) == 2);
}

TEST_CASE("truncated box size and order") {
  for (int d = 1; d <= 3; ++d)
    for (int radius = 0; radius <= 2; ++radius)
      CHECK(truncated_modes(d, radius).size() == static_cast<std::size_t>(std::pow(2 * radius + 1, d)));
  const auto modes = truncated_modes(2, 1);
  CHECK(std::is_sorted(modes.begin(), modes.end()));
}

TEST_CASE("property: gap is non-negative on random conserving indices at floor 1024") {
  for (double sigma : {2.1, 2.5, 4.0}) {
    const LatticeParams p{2, sigma, 1024.0};
    rng::Stream st(rng::hash({17, static_cast<std::uint64_t>(sigma * 100)}));
    double worst = 0.0;
    for (int i = 0; i < 20000; ++i) {
      const auto s = gen::random_gap_sample(2, 8192, 8, st);
      const auto sys = sorted_system(s.a, s.k, s.k_bar);
      double total = 0.0;
      for (const auto& m : sys) total += weight(m, p);
      const double gap = momentum_gap(s.a, s.k, s.k_bar, p);
      worst = std::min(worst, gap / std::max(1.0, total));
    }
    CHECK(worst >= -1e-12);
  }
}

TEST_CASE("property: sorted system is a permutation in norm order") {
  rng::Stream st(5);
  for (int i = 0; i < 2000; ++i) {
    const auto s = gen::random_gap_sample(3, 50, 6, st);
    const auto sys = sorted_system(s.a, s.k, s.k_bar);
    CHECK(static_cast<int>(sys.size()) == 2 * s.a.total() + s.k.total() + s.k_bar.total());
    for (std::size_t j = 1; j < sys.size(); ++j) CHECK(sys[j - 1].norm2() >= sys[j].norm2());
  }
}
