#include <doctest.h>

#include <cmath>

#include "kamnf/errors.hpp"
#include "kamnf/parallel.hpp"
#include "kamnf/verify.hpp"

using namespace kamnf;
using namespace kamnf::verify;

TEST_CASE("maximizer of x^p exp(-delta x)") {
  const double p = 2.0;
  const double delta = 0.5;
  const auto best = maximize([&](double x) { return std::pow(x, p) * std::exp(-delta * x); }, 0.0, 50.0);
  CHECK(best.x == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(best.value == doctest::Approx(2.1653645317858031).epsilon(1e-10));
  CHECK(best.value <= std::pow(p / (std::exp(1.0) * delta), p) * (1.0 + 1e-12));
}

TEST_CASE("superadditivity at the floor") {
  const double y = 1024.0;
  const double lhs = std::pow(std::log(2 * y), 2.5) - std::pow(std::log(y), 2.5) - 0.5 * std::pow(std::log(y), 2.5);
  CHECK(lhs <= 0.0);
  CHECK(log_superadditivity_log_constant(2.5) > 0.0);
}

TEST_CASE("lattice point counts") {
  CHECK(lattice_count(1, 3.5) == 7);
  CHECK(lattice_count(2, 1.0) == 5);
  CHECK(lattice_count(2, 1.5) == 9);
  CHECK(lattice_count(3, 0.5) == 1);
}

TEST_CASE("log-sum partial sums stay below the upper estimate") {
  for (double sigma : {2.05, 2.5, 4.0})
    for (double delta : {0.05, 0.3, 0.9}) CHECK(std::log(log_sum_partial(sigma, delta, 20000)) <= log_sum_upper(sigma, delta));
}

TEST_CASE("parameter overrides") {
  const auto base = resolve_params("f_max", {});
  CHECK(base.count("sigma_lo") == 1);
  const auto fixed = resolve_params("f_max", {{"sigma", 3.0}});
  CHECK(fixed.at("sigma") == 3.0);
  CHECK(fixed.count("sigma_lo") == 0);
  CHECK_THROWS_AS(resolve_params("f_max", {{"bogus", 1.0}}), ValidationError);
  CHECK_THROWS_AS(verify_lemma("no_such_lemma", {}, 10, 1), ValidationError);
  CHECK(is_scalar_lemma("log_sum"));
  CHECK(is_norm_lemma("gap"));
}

TEST_CASE("registered scalar suite passes at defaults") {
  const auto specs = default_scalar_suite();
  const auto cases = run_suite(specs, 1);
  REQUIRE(cases.size() == specs.size());
  for (const auto& c : cases) CHECK_MESSAGE(c.ok(), c.name << " " << params_digest(c.params));
  const auto summary = log_sum_dual_summary(cases);
  CHECK(summary.find("[tight]") != std::string::npos);
  CHECK(summary.find("[loose]") != std::string::npos);
}

TEST_CASE("gap lemma flags the small floor") {
  const auto c = verify_lemma("gap", {{"sigma", 2.5}, {"floor", 32.0}}, 100000, 3);
  CHECK(c.violations > 0);
  const auto big = verify_lemma("gap", {{"sigma", 2.5}, {"floor", 1024.0}}, 20000, 3);
  CHECK(big.ok());
}

TEST_CASE("suite results do not depend on the thread count") {
  const std::vector<LemmaSpec> specs{{"submultiplicativity", {}, 200}, {"g_max", {}, 300}, {"gap", {}, 2000}};
  set_thread_count(1);
  const auto one = run_suite(specs, 9);
  set_thread_count(0);
  const auto many = run_suite(specs, 9);
  REQUIRE(one.size() == many.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].seed == many[i].seed);
    CHECK(one[i].violations == many[i].violations);
    CHECK(one[i].worst_margin == many[i].worst_margin);
  }
}
