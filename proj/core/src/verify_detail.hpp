#pragma once

#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "kamnf/rng.hpp"
#include "kamnf/verify.hpp"

namespace kamnf::verify::detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Outcome {
  double margin = kNegInf;
  double tol = 0.0;
  bool hypothesis_met = true;
};

// A parameter `x` is either fixed as `x` or drawn uniformly from `x_lo`..`x_hi`.
struct Registered {
  std::string name;
  ParamMap defaults;
  std::function<void(const ParamMap&)> check;
  std::function<Outcome(const ParamMap&, rng::Stream&)> sample;
};

const std::vector<Registered>& scalar_registry();
const std::vector<Registered>& norm_registry();

double draw(const ParamMap& p, std::string_view key, rng::Stream& stream);
int draw_int(const ParamMap& p, std::string_view key, rng::Stream& stream);
double fixed(const ParamMap& p, std::string_view key);

// Every value or range endpoint of `key` lies in (lo, hi) or [lo, hi].
void require_in(const ParamMap& p, std::string_view key, double lo, double hi, bool open_lo, bool open_hi);

// ln(lhs) - (log_c + ln(rhs)); -inf when lhs is 0 or the constant overflows.
double log_margin(double lhs, double log_c, double rhs);

}  // namespace kamnf::verify::detail
