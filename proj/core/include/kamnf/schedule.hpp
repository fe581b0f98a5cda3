#pragma once

namespace kamnf::kam {

struct ScheduleParams {
  int s = 0;
  double delta = 0.0;
  double rho = 0.0;
  double eps = 0.0;
  double eps_next = 0.0;
  double lambda = 0.0;
  double eta = 0.0;
  double d_s = 0.0;
  double delta_sum = 0.0;  // sum of delta_i for i < s
};

ScheduleParams schedule(int s, double eps0);

double delta_at(int s);
// eps0^(1.5^s), computed through logs.
double eps_at(int s, double eps0);
double truncation_budget(int s, double eps0);

}  // namespace kamnf::kam
