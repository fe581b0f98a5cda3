#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "kamnf/errors.hpp"
#include "verify_detail.hpp"

namespace kamnf::verify {

using detail::kNegInf;
using detail::Outcome;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double x, double y) {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

// ln of int_a^inf exp(phi(y)) dy, phi peaking at `peak` (or decreasing when peak <= a).
double log_integral(const std::function<double(double)>& phi, double a, double peak) {
  const double top = std::max(a, peak);
  const double shift = phi(top);
  if (!std::isfinite(shift)) return kNegInf;
  auto shifted = [&](double y) {
    const double v = phi(y) - shift;
    return v < -745.0 ? 0.0 : std::exp(v);
  };
  double total = 0.0;
  double error = 0.0;
  if (peak > a) {
    boost::math::quadrature::tanh_sinh<double> inner;
    double err = 0.0;
    total += inner.integrate(shifted, a, peak, 1e-10, &err);
    error += err;
  }
  boost::math::quadrature::exp_sinh<double> outer;
  double err = 0.0;
  total += outer.integrate([&](double u) { return shifted(top + u); }, 0.0, kInf, 1e-10, &err);
  error += err;
  return shift + std::log(total + error + 1e-300);
}

double neg_log1m_exp(double x) { return -std::log1p(-std::exp(-x)); }

// ln(-ln(1 - e^{-x})) without underflow for large x.
double log_neg_log1m_exp(double x) {
  if (x > 30.0) return -x + std::log1p(0.5 * std::exp(-x));
  return std::log(neg_log1m_exp(x));
}

double sphere_area(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw ValidationError("lattice products support d <= 3");
  }
}

std::uint64_t count_recursive(int d, std::int64_t r2) {
  if (r2 < 0) return 0;
  if (d == 0) return 1;
  auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(r2)));
  while (root * root > r2) --root;
  while ((root + 1) * (root + 1) <= r2) ++root;
  if (d == 1) return static_cast<std::uint64_t>(2 * root + 1);
  std::uint64_t total = count_recursive(d - 1, r2);
  for (std::int64_t x = 1; x <= root; ++x) total += 2 * count_recursive(d - 1, r2 - x * x);
  return total;
}

// Calls visit(norm2) for every lattice point with lo2 < norm2 <= hi2.
void for_shell(int d, std::int64_t lo2, std::int64_t hi2, const std::function<void(std::int64_t)>& visit) {
  std::function<void(int, std::int64_t)> rec = [&](int left, std::int64_t acc) {
    if (left == 0) {
      if (acc > lo2) visit(acc);
      return;
    }
    for (std::int64_t x = 0; acc + x * x <= hi2; ++x) {
      const int copies = x == 0 ? 1 : 2;
      for (int c = 0; c < copies; ++c) rec(left - 1, acc + x * x);
    }
  };
  rec(d, 0);
}

double lnpow(double x, double sigma) { return std::pow(std::log(x), sigma); }

// ----- lemma samplers -----

Outcome sample_superadditivity(const ParamMap& p, rng::Stream& st) {
  const double sigma = detail::draw(p, "sigma", st);
  const double c = detail::fixed(p, "c");
  const double log_c = c == 0.0 ? log_superadditivity_log_constant(sigma) : std::log(c);
  const bool boundary = st.uniform() < 0.05;
  const double u = st.uniform();
  const double v = st.uniform();
  const double log_y = boundary ? log_c : log_c + 40.0 * u * u * u;
  const double log_t = boundary ? 0.0 : 40.0 * v * v * v;
  const double log_1pt = log_t + std::log1p(std::exp(-log_t));
  const double margin = std::pow(1.0 + log_1pt / log_y, sigma) - std::pow(1.0 + log_t / log_y, sigma) - 0.5;
  return {margin, 1e-12, true};
}

Outcome sample_f_max(const ParamMap& p, rng::Stream& st) {
  const double sigma = detail::draw(p, "sigma", st);
  const double delta = detail::draw(p, "delta", st);
  const double peak = std::pow(1.0 / (delta * sigma), 1.0 / (sigma - 1.0));
  const auto best = maximize([&](double x) { return -delta * std::pow(x, sigma) + x; }, 0.0, 4.0 * peak + 1.0);
  const double rhs = std::pow(1.0 / delta, 1.0 / (sigma - 1.0));
  return {best.value - rhs, 1e-12 * (1.0 + std::abs(rhs)), true};
}

Outcome sample_g_max(const ParamMap& p, rng::Stream& st) {
  const double power = detail::draw(p, "p", st);
  const double delta = detail::draw(p, "delta", st);
  const auto best = maximize(
      [&](double x) { return x <= 0.0 ? kNegInf : power * std::log(x) - delta * x; }, 0.0, 4.0 * power / delta);
  const double rhs = power * std::log(power / (std::numbers::e * delta));
  return {best.value - rhs, 1e-12 * (1.0 + std::abs(rhs)), true};
}

Outcome sample_poly_log_max(const ParamMap& p, rng::Stream& st) {
  const double power = detail::draw(p, "p", st);
  const double sigma = detail::draw(p, "sigma", st);
  const double delta = detail::draw(p, "delta", st);
  const double peak = std::pow(power / (delta * sigma), 1.0 / (sigma - 1.0));
  const auto best =
      maximize([&](double y) { return power * y - delta * std::pow(y, sigma); }, 0.0, 4.0 * peak + 1.0);
  const double rhs = power * std::pow(power / delta, 1.0 / (sigma - 1.0));
  return {best.value - rhs, 1e-12 * (1.0 + std::abs(rhs)), true};
}

Outcome sample_log_sum(const ParamMap& p, rng::Stream& st, double inner_num) {
  const double sigma = detail::draw(p, "sigma", st);
  const double delta = detail::draw(p, "delta", st);
  const double rhs = std::log(6.0 / delta) + std::pow(inner_num / delta, 1.0 / (sigma - 1.0));
  return {log_sum_upper(sigma, delta) - rhs, 1e-12 * (1.0 + std::abs(rhs)), true};
}

Outcome sample_geometric(const ParamMap& p, rng::Stream& st) {
  const int d = detail::draw_int(p, "d", st);
  const double sigma = detail::draw(p, "sigma", st);
  const double delta = detail::draw(p, "delta", st);
  const double floor_const = detail::fixed(p, "floor");
  const double lhs = log_geometric_product_upper(d, sigma, delta, floor_const);
  const double log_rhs = d * std::log(100.0 * d / (delta * delta)) + d * std::pow(2.0 * d / delta, 1.0 / (sigma - 1.0));
  return {lhs > 0.0 ? std::log(lhs) - log_rhs : kNegInf, 1e-12, true};
}

Outcome sample_poly_product(const ParamMap& p, rng::Stream& st) {
  const int d = detail::draw_int(p, "d", st);
  const int power = detail::draw_int(p, "p", st);
  const double sigma = detail::draw(p, "sigma", st);
  const double delta = detail::draw(p, "delta", st);
  const double floor_const = detail::fixed(p, "floor");
  const double lhs = log_poly_product(d, sigma, delta, power, floor_const);
  const double rhs = 3.0 * d * power * std::pow(power / delta, 1.0 / (sigma - 1.0)) *
                     std::exp(std::pow(1.0 / delta, 1.0 / sigma));
  return {lhs - rhs, 1e-12 * (1.0 + rhs), true};
}

void check_sigma_delta(const ParamMap& p) {
  detail::require_in(p, "sigma", 2.0, kInf, true, true);
  detail::require_in(p, "delta", 0.0, 1.0, true, true);
}

}  // namespace

Maximum maximize(const std::function<double(double)>& f, double lo, double hi, std::size_t grid) {
  if (!(hi > lo) || grid < 3) throw ValidationError("maximize: empty interval");
  const double step = (hi - lo) / static_cast<double>(grid - 1);
  Maximum best{lo, f(lo)};
  std::size_t best_i = 0;
  for (std::size_t i = 1; i < grid; ++i) {
    const double x = lo + step * static_cast<double>(i);
    const double v = f(x);
    if (v > best.value) {
      best = {x, v};
      best_i = i;
    }
  }
  double a = lo + step * static_cast<double>(best_i == 0 ? 0 : best_i - 1);
  double b = std::min(hi, lo + step * static_cast<double>(best_i + 1));
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = f(x1);
    }
  }
  if (f1 > best.value) best = {x1, f1};
  if (f2 > best.value) best = {x2, f2};
  return best;
}

double log_superadditivity_log_constant(double sigma) {
  const double c1 = sigma * std::pow(2.0, sigma) * std::numbers::ln2;
  const double c_star = 2.0 * std::pow((sigma - 1.0) / std::numbers::e, sigma - 1.0);
  const double c2 = std::pow(sigma * std::pow(2.0, sigma) * c_star, 1.0 / sigma);
  return std::max(c1, c2);
}

double log_sum_partial(double sigma, double delta, std::size_t terms) {
  double sum = 0.0;
  for (std::size_t j = 1; j <= terms; ++j) sum += std::exp(-delta * lnpow(static_cast<double>(j), sigma));
  return sum;
}

double log_sum_upper(double sigma, double delta) {
  constexpr std::size_t kHeadCap = 10000;
  double head = 0.0;
  std::size_t last = 1;
  for (std::size_t j = 1; j <= kHeadCap; ++j) {
    const double term = std::exp(-delta * lnpow(static_cast<double>(j), sigma));
    head += term;
    last = j;
    if (term < 1e-20) break;
  }
  const double start = std::log(static_cast<double>(last));
  const double peak = std::pow(1.0 / (delta * sigma), 1.0 / (sigma - 1.0));
  const double tail = log_integral([&](double y) { return y - delta * std::pow(y, sigma); }, start, peak);
  return log_add(std::log(head), tail);
}

std::uint64_t lattice_count(int d, double radius) {
  static std::mutex guard;
  static std::map<std::pair<int, std::int64_t>, std::uint64_t> memo;
  const auto r2 = static_cast<std::int64_t>(std::floor(radius * radius + 1e-9));
  const std::lock_guard lock(guard);
  const auto key = std::make_pair(d, r2);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  const auto value = count_recursive(d, r2);
  memo.emplace(key, value);
  return value;
}

double log_geometric_product_upper(int d, double sigma, double delta, double floor_const) {
  const double area = sphere_area(d);
  const double floor_weight = lnpow(floor_const, sigma);
  const double at_floor = neg_log1m_exp(delta * floor_weight);
  const double inside = static_cast<double>(lattice_count(d, floor_const)) * at_floor;
  // Each point outside the floor ball owns a unit cube lying beyond radius |n| - h.
  const double h = std::sqrt(static_cast<double>(d)) / 2.0;
  const double collar = area * at_floor *
                        (std::pow(floor_const + h, d) - std::pow(std::max(0.0, floor_const - h), d)) / d;
  auto phi = [&](double y) {
    return (d - 1) * (y + std::log1p(h * std::exp(-y))) + y + log_neg_log1m_exp(delta * std::pow(y, sigma));
  };
  const double peak = std::pow(d / (delta * sigma), 1.0 / (sigma - 1.0));
  const double far = std::log(area) + log_integral(phi, std::log(floor_const), peak);
  return inside + collar + std::exp(far);
}

double log_poly_product(int d, double sigma, double delta, int p, double floor_const) {
  double threshold = 0.0;
  for (int a = 1; a <= 1000; ++a) threshold = std::max(threshold, std::log1p(std::pow(a, p)) / (2.0 * a));
  auto per_mode = [&](double weight) {
    const double slope = 2.0 * delta * weight;
    if (slope >= threshold * 2.0) return 0.0;
    double best = 0.0;
    double prev = 0.0;
    for (int a = 1; a < 100000000; ++a) {
      const double v = std::log1p(std::pow(static_cast<double>(a), p)) - slope * a;
      best = std::max(best, v);
      if (v < prev && a > 2) break;
      prev = v;
    }
    return best;
  };
  const double floor_weight = lnpow(floor_const, sigma);
  if (delta * floor_weight >= threshold) return 0.0;
  const double radius = std::exp(std::pow(threshold / delta, 1.0 / sigma));
  double total = static_cast<double>(lattice_count(d, floor_const)) * per_mode(floor_weight);
  const auto lo2 = static_cast<std::int64_t>(std::floor(floor_const * floor_const + 1e-9));
  const auto hi2 = static_cast<std::int64_t>(std::ceil(radius * radius));
  if (d == 1) {
    const auto lo = static_cast<std::int64_t>(std::floor(floor_const)) + 1;
    const auto hi = static_cast<std::int64_t>(std::ceil(radius));
    if (hi - lo > 200000000) throw ValidationError("poly product: parameters outside the enumerable range");
    for (std::int64_t n = lo; n <= hi; ++n) total += 2.0 * per_mode(lnpow(static_cast<double>(n), sigma));
    return total;
  }
  if (hi2 > 50000000 || lattice_count(d, radius) > 50000000)
    throw ValidationError("poly product: parameters outside the enumerable range");
  std::vector<std::uint64_t> histogram(static_cast<std::size_t>(hi2 + 1), 0);
  for_shell(d, lo2, hi2, [&](std::int64_t n2) { ++histogram[static_cast<std::size_t>(n2)]; });
  for (std::int64_t n2 = lo2 + 1; n2 <= hi2; ++n2) {
    const auto count = histogram[static_cast<std::size_t>(n2)];
    if (count == 0) continue;
    total += static_cast<double>(count) * per_mode(lnpow(std::sqrt(static_cast<double>(n2)), sigma));
  }
  return total;
}

namespace detail {

const std::vector<Registered>& scalar_registry() {
  static const std::vector<Registered> registry = [] {
    std::vector<Registered> r;
    r.push_back({"log_superadditivity",
                 {{"sigma_lo", 2.05}, {"sigma_hi", 4.0}, {"c", 1024.0}},
                 [](const ParamMap& p) {
                   require_in(p, "sigma", 2.0, kInf, true, true);
                   const double c = fixed(p, "c");
                   if (c != 0.0 && !(c > std::exp(3.0)))
                     throw ValidationError("log_superadditivity: c must exceed e^3 (or be 0 for the sigma-dependent constant)");
                 },
                 sample_superadditivity});
    r.push_back({"f_max",
                 {{"sigma_lo", 2.05}, {"sigma_hi", 6.0}, {"delta_lo", 0.01}, {"delta_hi", 0.99}},
                 check_sigma_delta, sample_f_max});
    r.push_back({"g_max",
                 {{"p_lo", 1.0}, {"p_hi", 4.0}, {"delta_lo", 0.01}, {"delta_hi", 0.99}},
                 [](const ParamMap& p) {
                   require_in(p, "p", 1.0, kInf, false, true);
                   require_in(p, "delta", 0.0, 1.0, true, true);
                 },
                 sample_g_max});
    r.push_back({"poly_log_max",
                 {{"p_lo", 1.0}, {"p_hi", 4.0}, {"sigma_lo", 2.05}, {"sigma_hi", 6.0}, {"delta_lo", 0.01},
                  {"delta_hi", 0.99}},
                 [](const ParamMap& p) {
                   require_in(p, "p", 1.0, kInf, false, true);
                   check_sigma_delta(p);
                 },
                 sample_poly_log_max});
    r.push_back({"log_sum",
                 {{"sigma_lo", 2.05}, {"sigma_hi", 6.0}, {"delta_lo", 0.05}, {"delta_hi", 0.99}},
                 check_sigma_delta,
                 [](const ParamMap& p, rng::Stream& st) { return sample_log_sum(p, st, 1.0); }});
    r.push_back({"log_sum_proof",
                 {{"sigma_lo", 2.05}, {"sigma_hi", 6.0}, {"delta_lo", 0.05}, {"delta_hi", 0.99}},
                 check_sigma_delta,
                 [](const ParamMap& p, rng::Stream& st) { return sample_log_sum(p, st, 2.0); }});
    r.push_back({"geometric_product",
                 {{"d", 1.0}, {"sigma_lo", 2.05}, {"sigma_hi", 6.0}, {"delta_lo", 0.005}, {"delta_hi", 0.17},
                  {"floor", 1024.0}},
                 [](const ParamMap& p) {
                   check_sigma_delta(p);
                   require_in(p, "d", 1.0, 3.0, false, false);
                   require_in(p, "floor", 1.0, kInf, false, true);
                 },
                 sample_geometric});
    r.push_back({"poly_product",
                 {{"d", 1.0}, {"p_lo", 1.0}, {"p_hi", 2.0}, {"sigma_lo", 2.05}, {"sigma_hi", 6.0},
                  {"delta_lo", 0.02}, {"delta_hi", 0.99}, {"floor", 1024.0}},
                 [](const ParamMap& p) {
                   check_sigma_delta(p);
                   require_in(p, "d", 1.0, 3.0, false, false);
                   require_in(p, "p", 1.0, 2.0, false, false);
                   require_in(p, "floor", 1.0, kInf, false, true);
                 },
                 sample_poly_product});
    return r;
  }();
  return registry;
}

}  // namespace detail

std::vector<LemmaSpec> default_scalar_suite() {
  return {
      {"log_superadditivity", {}, 100000},
      {"log_superadditivity", {{"c", 0.0}, {"sigma_lo", 4.0}, {"sigma_hi", 8.0}}, 100000},
      {"f_max", {}, 1000},
      {"g_max", {}, 1000},
      {"poly_log_max", {}, 1000},
      {"log_sum", {}, 1000},
      {"log_sum_proof", {}, 1000},
      {"geometric_product", {}, 1000},
      {"geometric_product", {{"d", 2.0}}, 1000},
      {"poly_product", {}, 1000},
      {"poly_product", {{"floor", 21.0}}, 1000},
      {"poly_product", {{"d", 2.0}, {"floor", 21.0}}, 1000},
  };
}

}  // namespace kamnf::verify
