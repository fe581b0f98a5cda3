#include "kamnf/constants.hpp"

#include <algorithm>

namespace kamnf::constants {

double rho_ceiling() { return 3.0 - 2.0 * std::sqrt(2.0); }
double rho_zero() { return rho_ceiling() / 100.0; }

double safe_exp(double x) { return std::exp(x); }

double safe_log(double x) { return x <= 0.0 ? -kInf : std::log(x); }

namespace {
// a^b * exp(c) computed as exp(b ln a + c), +inf on overflow.
double pow_times_exp(double base, double power, double exponent) {
  const double lg = power * std::log(base) + exponent;
  return lg > 709.0 ? kInf : std::exp(lg);
}

double tower(int d, double sigma, double inner_num, double delta_pow, double delta, double outer_num) {
  // (outer_num d / delta^delta_pow)^d * exp{d (inner_num d / delta)^{1/(sigma-1)}}
  const double inner = d * std::pow(inner_num * d / delta, 1.0 / (sigma - 1.0));
  return pow_times_exp(outer_num * d / std::pow(delta, delta_pow), d, inner);
}
}  // namespace

double log_bracket(int d, double sigma, double delta1, double delta2) {
  return -std::log(delta2) + 3.0 * tower(d, sigma, 24.0, 2.0, delta1, 14400.0);
}

double log_flow_core(int d, double sigma, double delta) { return 3.0 * tower(d, sigma, 24.0, 2.0, delta, 14400.0); }

double log_vector_field(int d, double sigma, double delta) {
  return 10.0 * d * tower(d, sigma, 10.0, 2.0, delta, 2000.0);
}

double log_vector_field_large_delta(int d) {
  return 10.0 * d * pow_times_exp(8000.0 * d, d, 20.0 * d * d);
}

double log_second_derivative(int d, double sigma, double delta) {
  return 2.0 * std::log(12.0 / (std::exp(1.0) * delta)) + tower(d, sigma, 12.0, 2.0, delta, 3600.0);
}

double log_transfer_to_plus(int d, double sigma, double delta) {
  const double inner = std::pow(10.0 / delta, 1.0 / sigma);
  return 10.0 * d * pow_times_exp(10.0 / delta, 1.0 / (sigma - 1.0), inner);
}

double log_transfer_from_plus(double delta) { return std::log(64.0 / (std::exp(2.0) * delta * delta)); }

bool flow_smallness(int d, double sigma, double delta, double f_norm) {
  if (f_norm == 0.0) return true;
  const double lg = std::log(2.0 * std::exp(1.0) / delta) + log_flow_core(d, sigma, delta) + std::log(f_norm);
  return lg < std::log(0.5);
}

double log_flow_bound(int d, double sigma, double delta, double f_norm, double h_norm) {
  const double lh = safe_log(h_norm);
  if (f_norm == 0.0) return lh;
  const double lg = std::log(4.0 * std::exp(1.0) / delta) + log_flow_core(d, sigma, delta) + std::log(f_norm);
  // log(1 + e^lg) computed stably.
  const double l1p = lg > 30.0 ? lg : std::log1p(std::exp(lg));
  return l1p + lh;
}

bool holds_log(double lhs, double log_c, double rhs, double rel_slack) {
  if (lhs <= 0.0) return true;
  if (rhs <= 0.0) return false;
  const double right = log_c + std::log(rhs);
  if (right == kInf) return true;
  return std::log(lhs) <= right + std::log1p(rel_slack);
}

}  // namespace kamnf::constants
