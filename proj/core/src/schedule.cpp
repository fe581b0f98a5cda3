#include "kamnf/schedule.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kamnf/constants.hpp"
#include "kamnf/errors.hpp"

namespace kamnf::kam {

namespace {
double log_factor(int s) {
  const double l = std::log(s + 4.0);
  return (s + 4.0) * l * l;
}
}  // namespace

double delta_at(int s) { return constants::rho_zero() / log_factor(s); }

double eps_at(int s, double eps0) { return std::exp(std::pow(1.5, s) * std::log(eps0)); }

double truncation_budget(int s, double eps0) {
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw ValidationError("eps0 must be in (0,1)");
  if (s < 0) throw ValidationError("step index must be >= 0");
  return 2.0 * log_factor(s) / constants::rho_zero() * (-std::pow(1.5, s + 1) * std::log(eps0));
}

ScheduleParams schedule(int s, double eps0) {
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw ValidationError("eps0 must be in (0,1), got " + std::to_string(eps0));
  if (s < 0) throw ValidationError("step index must be >= 0");
  ScheduleParams p;
  p.s = s;
  p.rho = constants::rho_zero();
  p.eta = std::pow(eps0, 0.01);
  for (int i = 0; i < s; ++i) {
    const double di = delta_at(i);
    p.delta_sum += di;
    p.rho += 3.0 * di;
    p.eta *= std::pow(eps_at(i, eps0), 0.01) / 20.0;
    p.d_s += 1.0 / (std::numbers::pi * std::numbers::pi * (i + 1.0) * (i + 1.0));
  }
  p.delta = delta_at(s);
  p.eps = eps_at(s, eps0);
  p.eps_next = eps_at(s + 1, eps0);
  p.lambda = std::pow(p.eps, 0.01);
  return p;
}

}  // namespace kamnf::kam
