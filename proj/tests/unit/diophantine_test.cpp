#include <doctest.h>

#include <cmath>

#include "kamnf/diophantine.hpp"
#include "kamnf/errors.hpp"

using namespace kamnf;
using namespace kamnf::dioph;

namespace {
SignedIndex single(const Mode& n, int count) {
  SignedIndex ell;
  if (count > 0) ell.pos.add(n, count);
  if (count < 0) ell.neg.add(n, -count);
  return ell;
}
}  // namespace

TEST_CASE("distance to the integers") {
  CHECK(dist_to_integers(0.5) == 0.5);
  CHECK(dist_to_integers(-1.25) == 0.25);
  CHECK(dist_to_integers(3.0) == 0.0);
  CHECK(dist_to_integers(0.9) == doctest::Approx(0.1));
}

TEST_CASE("first condition right-hand side") {
  const DiophParams p{0.1, 1, 4, 2};
  CHECK(dioph_rhs(single(Mode{0}, 1), p, 1) == doctest::Approx(0.05));
  CHECK(dioph_rhs(single(Mode{1}, 2), p, 1) == doctest::Approx(0.1 / 9.0));
  CHECK_THROWS_AS(dioph_rhs(SignedIndex{}, p, 1), ValidationError);
}

TEST_CASE("second condition with an empty product") {
  const DiophParams p{0.1, 1, 4, 2};
  SignedIndex ell;
  ell.pos.add(Mode{2}, 1);
  ell.neg.add(Mode{1}, 1);
  CHECK(dioph_rhs(ell, p, 2) == doctest::Approx(std::pow(0.1, 5) / 100.0));
}

TEST_CASE("check on hand-picked frequencies") {
  FrequencyVector zero{{Mode{0}, 0.0}};
  const auto bad = check_frequency(zero, {0.1, 1, 3, 0});
  CHECK_FALSE(bad.ok());
  CHECK(bad.violation_count >= bad.checked);

  FrequencyVector half{{Mode{0}, 0.5}};
  const auto rep = check_frequency(half, {0.5, 1, 1, 0});
  CHECK(rep.checked == 1);
  CHECK(rep.ok());
  CHECK(rep.worst_margin == doctest::Approx(0.25));
}

TEST_CASE("sampling is deterministic, order-independent and in the box") {
  const auto modes = lattice::truncated_modes(2, 2);
  const auto a = sample_frequency(modes, 42);
  std::vector<Mode> reversed(modes.rbegin(), modes.rend());
  const auto b = sample_frequency(reversed, 42);
  CHECK(a == b);
  CHECK(in_box(a));
  CHECK(a != sample_frequency(modes, 43));
}

TEST_CASE("property: sample mean matches the uniform law") {
  const std::vector<Mode> modes{Mode{0}, Mode{2}};
  const int draws = 100000;
  for (const auto& n : modes) {
    double sum = 0.0;
    for (int c = 0; c < draws; ++c) sum += sample_frequency(std::span(&n, 1), 7, static_cast<std::uint64_t>(c)).at(n);
    const double top = 1.0 / angle_norm(n);
    const double se = top / std::sqrt(12.0 * draws);
    CHECK(std::abs(sum / draws - top / 2.0) <= 3.0 * se);
  }
}

TEST_CASE("property: violation count never increases as gamma shrinks") {
  const auto modes = lattice::truncated_modes(1, 2);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto omega = sample_frequency(modes, seed);
    std::size_t previous = std::numeric_limits<std::size_t>::max();
    for (double gamma : {0.5, 0.1, 0.05, 0.01, 0.001}) {
      const auto rep = check_frequency(omega, {gamma, 1, 4, 2});
      CHECK(rep.violation_count <= previous);
      previous = rep.violation_count;
    }
  }
}

TEST_CASE("resonance measure is monotone and thread-count independent") {
  const DiophParams base{0.01, 1, 4, 2};
  std::vector<MeasureEstimate> rows;
  for (double gamma : {0.01, 0.05, 0.1}) {
    auto p = base;
    p.gamma = gamma;
    rows.push_back(resonance_measure(p, 4000, 11));
  }
  CHECK(rows[0].fraction <= rows[1].fraction);
  CHECK(rows[1].fraction <= rows[2].fraction);
  const auto fit = fit_measure(rows);
  CHECK(fit.monotone);
  CHECK(std::isfinite(fit.slope));
  CHECK(fit.slope > 0.0);
}

TEST_CASE("fit through the origin recovers an exact line") {
  std::vector<MeasureEstimate> rows;
  for (double g : {0.01, 0.02, 0.04}) {
    MeasureEstimate m;
    m.gamma = g;
    m.trials = 10000;
    m.fraction = 3.0 * g;
    m.stderr_ = std::sqrt(m.fraction * (1 - m.fraction) / m.trials);
    rows.push_back(m);
  }
  const auto fit = fit_measure(rows);
  CHECK(fit.slope == doctest::Approx(3.0));
  CHECK(fit.bounded);
}
