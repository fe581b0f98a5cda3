#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "kamnf/lattice.hpp"

namespace kamnf::dioph {

using lattice::Mode;
using lattice::SignedIndex;
using FrequencyVector = std::map<Mode, double>;

struct DiophParams {
  double gamma = 0.1;
  int d = 1;
  int ell_budget = 4;
  int mode_radius = 2;

  void validate() const;
};

double dist_to_integers(double x);
double angle_norm(const Mode& n);

bool condition2_applies(const SignedIndex& ell);
double dioph_rhs(const SignedIndex& ell, const DiophParams& p, int which);

struct Violation {
  SignedIndex ell;
  int which;
  double lhs;
  double rhs;
  [[nodiscard]] double margin() const { return lhs - rhs; }
};

struct CheckReport {
  std::vector<Violation> violations;
  std::size_t violation_count = 0;
  std::size_t checked = 0;
  int ell_budget = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  [[nodiscard]] bool ok() const { return violation_count == 0; }
};

struct CheckOptions {
  std::size_t max_listed = 64;
  bool stop_at_first = false;
};

// Only sign-canonical ell (first nonzero entry positive) are visited.
CheckReport check_frequency(const FrequencyVector& omega, const DiophParams& p, const CheckOptions& opts = {});

bool in_box(const FrequencyVector& omega);

FrequencyVector sample_frequency(std::span<const Mode> modes, std::uint64_t seed, std::uint64_t counter = 0);

// First counter whose sample passes both conditions; throws after max_attempts.
FrequencyVector sample_diophantine(const DiophParams& p, std::uint64_t seed, int max_attempts = 64);

struct MeasureEstimate {
  double gamma = 0.0;
  int trials = 0;
  int violations = 0;
  double fraction = 0.0;
  double stderr_ = 0.0;
  int ell_budget = 0;
  int mode_radius = 0;
  std::uint64_t seed = 0;
};

MeasureEstimate resonance_measure(const DiophParams& p, int trials, std::uint64_t seed);

struct MeasureFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  std::vector<double> excess;  // (fraction - slope*gamma) / stderr, per point
  bool monotone = true;
  bool bounded = true;
};

// Weighted least squares through the origin, weights 1/stderr^2.
MeasureFit fit_measure(std::span<const MeasureEstimate> points, double max_excess = 2.0);

}  // namespace kamnf::dioph
