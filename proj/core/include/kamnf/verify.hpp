#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kamnf::verify {

using ParamMap = std::map<std::string, double, std::less<>>;

// margin <= 0 means the inequality held; for product-type lemmas it is ln(LHS/RHS).
struct LemmaCase {
  std::string name;
  ParamMap params;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;
  // Samples where the lemma's own smallness hypothesis could not be met in double precision.
  std::size_t hypothesis_unmet = 0;
  double seconds = 0.0;

  [[nodiscard]] bool ok() const { return violations == 0; }
};

struct LemmaSpec {
  std::string name;
  ParamMap params;
  std::size_t samples = 1000;
};

std::vector<std::string> scalar_lemma_names();
std::vector<std::string> norm_lemma_names();
bool is_scalar_lemma(std::string_view name);
bool is_norm_lemma(std::string_view name);

// Defaults merged with overrides; unknown keys or hypothesis violations throw ValidationError.
ParamMap resolve_params(std::string_view name, const ParamMap& overrides);

LemmaCase verify_scalar_lemma(std::string_view name, const ParamMap& params, std::size_t samples,
                              std::uint64_t seed);
LemmaCase verify_norm_lemma(std::string_view name, const ParamMap& params, std::size_t samples,
                            std::uint64_t seed);
LemmaCase verify_lemma(std::string_view name, const ParamMap& params, std::size_t samples, std::uint64_t seed);

std::vector<LemmaSpec> default_scalar_suite();
std::vector<LemmaSpec> default_norm_suite();

// Cases run in parallel; each is seeded from (seed, position).
std::vector<LemmaCase> run_suite(std::span<const LemmaSpec> specs, std::uint64_t seed);

std::string params_digest(const ParamMap& params);

// Which log-sum right-hand side held empirically, from the two log-sum cases in `cases`.
std::string log_sum_dual_summary(std::span<const LemmaCase> cases);

// Scalar helpers shared with the tests.
struct Maximum {
  double x;
  double value;
};
// Coarse grid of `grid` points on [lo, hi], then golden-section around the best node.
Maximum maximize(const std::function<double(double)>& f, double lo, double hi, std::size_t grid = 10000);

double log_superadditivity_log_constant(double sigma);  // ln max(c1, c2)
double log_sum_partial(double sigma, double delta, std::size_t terms);
// Upper estimate of ln sum_{j>=1} exp(-delta ln^sigma j): exact head plus integral tail.
double log_sum_upper(double sigma, double delta);
// sum_n -ln(1 - exp(-delta ln^sigma floor(n))) over Z^d, upper estimate.
double log_geometric_product_upper(int d, double sigma, double delta, double floor_const);
// ln sup_a prod_n (1 + a_n^p) exp(-2 delta a_n ln^sigma floor(n)), exact.
double log_poly_product(int d, double sigma, double delta, int p, double floor_const);
// Number of lattice points with Euclidean norm <= radius.
std::uint64_t lattice_count(int d, double radius);

}  // namespace kamnf::verify
