#pragma once

#include <cmath>
#include <limits>

// Natural logs of the explicit lemma constants. Overflow saturates at +inf.
namespace kamnf::constants {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

double rho_zero();          // (3 - 2 sqrt 2) / 100
double rho_ceiling();       // 3 - 2 sqrt 2

// e^x without overflow surprises: +inf stays +inf.
double safe_exp(double x);
double safe_log(double x);  // log(0) = -inf

double log_bracket(int d, double sigma, double delta1, double delta2);
double log_flow_core(int d, double sigma, double delta);
double log_vector_field(int d, double sigma, double delta);
double log_vector_field_large_delta(int d);
double log_second_derivative(int d, double sigma, double delta);
double log_transfer_to_plus(int d, double sigma, double delta);
double log_transfer_from_plus(double delta);

// Is (2e/delta) K ||F|| < 1/2 ?
bool flow_smallness(int d, double sigma, double delta, double f_norm);
// log of (1 + (4e/delta) K ||F||) ||H||.
double log_flow_bound(int d, double sigma, double delta, double f_norm, double h_norm);

// ln(lhs) <= ln(c) + ln(rhs) with a relative slack on finite values.
bool holds_log(double lhs, double log_c, double rhs, double rel_slack = 1e-12);

}  // namespace kamnf::constants
