#include "kamnf/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kamnf/errors.hpp"
#include "kamnf/parallel.hpp"
#include "kamnf/rng.hpp"

namespace kamnf::dioph {

void DiophParams::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ValidationError("gamma must be in [0,1), got " + std::to_string(gamma));
  if (d < 1 || d > lattice::kMaxDim) throw ValidationError("d out of range: " + std::to_string(d));
  if (ell_budget < 1) throw ValidationError("ell_budget must be >= 1");
  if (mode_radius < 0) throw ValidationError("mode_radius must be >= 0");
}

double dist_to_integers(double x) { return std::abs(x - std::nearbyint(x)); }

double angle_norm(const Mode& n) { return std::max(1.0, n.euclid()); }

namespace {

struct Entry {
  Mode mode;
  int value;  // nonzero
};

// Squared norms of the 2nd and 3rd largest sorted-system entries; -1 when absent.
std::pair<std::int64_t, std::int64_t> second_third(std::span<const Entry> entries) {
  std::vector<std::int64_t> norms;
  for (const auto& e : entries) norms.insert(norms.end(), static_cast<std::size_t>(std::abs(e.value)), e.mode.norm2());
  std::sort(norms.begin(), norms.end(), std::greater<>());
  return {norms.size() > 1 ? norms[1] : -1, norms.size() > 2 ? norms[2] : -1};
}

bool applies(std::span<const Entry> entries, int total) {
  if (total < 2) return false;
  if (total == 2) return true;
  const auto [n2, n3] = second_third(entries);
  return n3 < n2;
}

double rhs1(std::span<const Entry> entries, double gamma, int d) {
  double prod = gamma;
  for (const auto& e : entries) {
    const double v = std::abs(e.value);
    prod /= 1.0 + v * v * v * std::pow(angle_norm(e.mode), d + 4);
  }
  return prod;
}

double rhs2(std::span<const Entry> entries, double gamma, int d, int total) {
  double prod = std::pow(gamma, 5) / 100.0;
  if (total < 3) return prod;
  const auto [n2, n3] = second_third(entries);
  (void)n2;
  for (const auto& e : entries) {
    if (e.mode.norm2() > n3) continue;
    const double v = std::abs(e.value);
    prod *= std::pow(1.0 / (1.0 + v * v * v * std::pow(angle_norm(e.mode), d + 7)), 10);
  }
  return prod;
}

std::vector<Entry> entries_of(const SignedIndex& ell) {
  std::vector<Entry> out;
  for (const auto& [m, e] : ell.pos.entries()) out.push_back({m, e});
  for (const auto& [m, e] : ell.neg.entries()) out.push_back({m, -e});
  return out;
}

SignedIndex to_signed(std::span<const Entry> entries) {
  SignedIndex s;
  for (const auto& e : entries) (e.value > 0 ? s.pos : s.neg).add(e.mode, std::abs(e.value));
  return s;
}

class Enumerator {
 public:
  Enumerator(const FrequencyVector& omega, const DiophParams& p, const CheckOptions& opts, CheckReport& report)
      : p_(p), opts_(opts), report_(report) {
    for (const auto& [m, w] : omega) {
      modes_.push_back(m);
      omega_.push_back(w);
    }
  }

  void run() {
    for (int total = 1; total <= p_.ell_budget && !stop_; ++total) {
      total_ = total;
      visit(0, total, 0.0, false);
    }
  }

 private:
  void visit(std::size_t i, int rem, double sum, bool started) {
    if (stop_) return;
    if (rem == 0) {
      leaf(sum);
      return;
    }
    if (i == modes_.size()) return;
    for (int v = -rem; v <= rem; ++v) {
      if (!started && v < 0) continue;
      if (v == 0) {
        visit(i + 1, rem, sum, started);
        continue;
      }
      stack_.push_back({modes_[i], v});
      visit(i + 1, rem - std::abs(v), sum + v * omega_[i], true);
      stack_.pop_back();
      if (stop_) return;
    }
  }

  void leaf(double sum) {
    ++report_.checked;
    const double lhs = dist_to_integers(sum);
    record(1, lhs, rhs1(stack_, p_.gamma, p_.d));
    if (applies(stack_, total_)) record(2, lhs, rhs2(stack_, p_.gamma, p_.d, total_));
  }

  void record(int which, double lhs, double rhs) {
    report_.worst_margin = std::min(report_.worst_margin, lhs - rhs);
    if (!(lhs < rhs)) return;
    ++report_.violation_count;
    if (report_.violations.size() < opts_.max_listed) report_.violations.push_back({to_signed(stack_), which, lhs, rhs});
    if (opts_.stop_at_first) stop_ = true;
  }

  const DiophParams& p_;
  const CheckOptions& opts_;
  CheckReport& report_;
  std::vector<Mode> modes_;
  std::vector<double> omega_;
  std::vector<Entry> stack_;
  int total_ = 0;
  bool stop_ = false;
};

}  // namespace

bool condition2_applies(const SignedIndex& ell) {
  const auto entries = entries_of(ell);
  return applies(entries, ell.total());
}

double dioph_rhs(const SignedIndex& ell, const DiophParams& p, int which) {
  if (ell.empty()) throw ValidationError("ell must be nonzero");
  const auto entries = entries_of(ell);
  if (which == 1) return rhs1(entries, p.gamma, p.d);
  if (which == 2) {
    if (!applies(entries, ell.total()))
      throw ValidationError("second condition does not apply: needs |n3*| < |n2*|");
    return rhs2(entries, p.gamma, p.d, ell.total());
  }
  throw ValidationError("which must be 1 or 2, got " + std::to_string(which));
}

CheckReport check_frequency(const FrequencyVector& omega, const DiophParams& p, const CheckOptions& opts) {
  p.validate();
  CheckReport report;
  report.ell_budget = p.ell_budget;
  Enumerator(omega, p, opts, report).run();
  return report;
}

bool in_box(const FrequencyVector& omega) {
  return std::all_of(omega.begin(), omega.end(),
                     [](const auto& e) { return e.second >= 0.0 && e.second <= 1.0 / angle_norm(e.first); });
}

namespace {
std::uint64_t mode_key(const Mode& m) {
  std::uint64_t h = m.dim;
  for (int i = 0; i < m.dim; ++i) h = rng::splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(m.c[i])));
  return h;
}
}  // namespace

FrequencyVector sample_frequency(std::span<const Mode> modes, std::uint64_t seed, std::uint64_t counter) {
  FrequencyVector out;
  for (const auto& m : modes) out[m] = rng::to_unit(rng::hash({seed, mode_key(m), counter})) / angle_norm(m);
  return out;
}

FrequencyVector sample_diophantine(const DiophParams& p, std::uint64_t seed, int max_attempts) {
  p.validate();
  const auto modes = lattice::truncated_modes(p.d, p.mode_radius);
  for (int c = 0; c < max_attempts; ++c) {
    auto omega = sample_frequency(modes, seed, static_cast<std::uint64_t>(c));
    if (check_frequency(omega, p, {0, true}).ok()) return omega;
  }
  throw SmallDivisorError("no strong-Diophantine sample within " + std::to_string(max_attempts) + " attempts");
}

MeasureEstimate resonance_measure(const DiophParams& p, int trials, std::uint64_t seed) {
  p.validate();
  if (trials < 1) throw ValidationError("trials must be >= 1");
  const auto modes = lattice::truncated_modes(p.d, p.mode_radius);
  const auto hits = map_chunks<int>(static_cast<std::size_t>(trials), 256, [&](std::size_t b, std::size_t e) {
    int count = 0;
    for (std::size_t t = b; t < e; ++t) {
      const auto omega = sample_frequency(modes, rng::hash({seed, 0x7472ULL, t}), 0);
      if (!check_frequency(omega, p, {0, true}).ok()) ++count;
    }
    return std::vector<int>{count};
  });
  MeasureEstimate m;
  m.gamma = p.gamma;
  m.trials = trials;
  for (int h : hits) m.violations += h;
  m.fraction = static_cast<double>(m.violations) / trials;
  m.stderr_ = std::sqrt(m.fraction * (1.0 - m.fraction) / trials);
  m.ell_budget = p.ell_budget;
  m.mode_radius = p.mode_radius;
  m.seed = seed;
  return m;
}

MeasureFit fit_measure(std::span<const MeasureEstimate> points, double max_excess) {
  MeasureFit fit;
  double num = 0.0;
  double den = 0.0;
  auto effective = [](const MeasureEstimate& m) { return std::max(m.stderr_, 1.0 / m.trials); };
  for (const auto& m : points) {
    const double w = 1.0 / (effective(m) * effective(m));
    num += w * m.gamma * m.fraction;
    den += w * m.gamma * m.gamma;
  }
  fit.slope = den > 0.0 ? num / den : 0.0;
  fit.slope_stderr = den > 0.0 ? 1.0 / std::sqrt(den) : 0.0;
  std::vector<MeasureEstimate> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.gamma < y.gamma; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].fraction < sorted[i - 1].fraction) fit.monotone = false;
  for (const auto& m : points) {
    const double z = (m.fraction - fit.slope * m.gamma) / effective(m);
    fit.excess.push_back(z);
    if (z > max_excess) fit.bounded = false;
  }
  return fit;
}

}  // namespace kamnf::dioph
