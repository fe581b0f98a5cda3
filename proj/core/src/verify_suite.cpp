#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "kamnf/errors.hpp"
#include "kamnf/parallel.hpp"
#include "verify_detail.hpp"

namespace kamnf::verify {

namespace detail {

namespace {

std::string key_str(std::string_view key, std::string_view suffix) {
  std::string s(key);
  s += suffix;
  return s;
}

}  // namespace

double fixed(const ParamMap& p, std::string_view key) {
  if (auto it = p.find(key); it != p.end()) return it->second;
  throw ValidationError("parameter '" + std::string(key) + "' must be a fixed value");
}

double draw(const ParamMap& p, std::string_view key, rng::Stream& stream) {
  if (auto it = p.find(key); it != p.end()) return it->second;
  return stream.uniform(fixed(p, key_str(key, "_lo")), fixed(p, key_str(key, "_hi")));
}

int draw_int(const ParamMap& p, std::string_view key, rng::Stream& stream) {
  if (auto it = p.find(key); it != p.end()) return static_cast<int>(std::lround(it->second));
  return stream.integer(static_cast<int>(std::lround(fixed(p, key_str(key, "_lo")))),
                        static_cast<int>(std::lround(fixed(p, key_str(key, "_hi")))));
}

void require_in(const ParamMap& p, std::string_view key, double lo, double hi, bool open_lo, bool open_hi) {
  auto check = [&](const std::string& k, double v) {
    const bool low_ok = open_lo ? v > lo : v >= lo;
    const bool high_ok = open_hi ? v < hi : v <= hi;
    if (!low_ok || !high_ok || std::isnan(v))
      throw ValidationError("parameter '" + k + "' = " + std::to_string(v) + " outside its hypothesis range");
  };
  bool seen = false;
  for (const auto& k : {std::string(key), key_str(key, "_lo"), key_str(key, "_hi")}) {
    if (auto it = p.find(k); it != p.end()) {
      check(k, it->second);
      seen = true;
    }
  }
  if (!seen) throw ValidationError("missing parameter '" + std::string(key) + "'");
  const auto lo_it = p.find(key_str(key, "_lo"));
  const auto hi_it = p.find(key_str(key, "_hi"));
  if (lo_it != p.end() && hi_it != p.end() && lo_it->second > hi_it->second)
    throw ValidationError("parameter range for '" + std::string(key) + "' is empty");
}

double log_margin(double lhs, double log_c, double rhs) {
  if (lhs <= 0.0 || log_c == std::numeric_limits<double>::infinity()) return kNegInf;
  if (rhs <= 0.0) return std::numeric_limits<double>::infinity();
  return std::log(lhs) - (log_c + std::log(rhs));
}

}  // namespace detail

namespace {

using detail::Registered;

const Registered& lookup(std::string_view name, bool scalar, bool norm) {
  if (scalar)
    for (const auto& r : detail::scalar_registry())
      if (r.name == name) return r;
  if (norm)
    for (const auto& r : detail::norm_registry())
      if (r.name == name) return r;
  throw ValidationError("unknown lemma '" + std::string(name) + "'");
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

ParamMap merge(const Registered& r, const ParamMap& overrides) {
  ParamMap out = r.defaults;
  for (const auto& [key, value] : overrides) {
    if (out.contains(key)) {
      out[key] = value;
      continue;
    }
    if (out.contains(key + "_lo")) {
      out.erase(key + "_lo");
      out.erase(key + "_hi");
      out[key] = value;
      continue;
    }
    const bool lo = ends_with(key, "_lo");
    if ((lo || ends_with(key, "_hi")) && out.contains(key.substr(0, key.size() - 3))) {
      const std::string base = key.substr(0, key.size() - 3);
      const double old = out[base];
      out.erase(base);
      out[base + "_lo"] = old;
      out[base + "_hi"] = old;
      out[key] = value;
      continue;
    }
    throw ValidationError("lemma '" + r.name + "' has no parameter '" + key + "'");
  }
  return out;
}

LemmaCase run_registered(const Registered& r, const ParamMap& overrides, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw ValidationError("sample count must be positive");
  ParamMap params = merge(r, overrides);
  r.check(params);
  const auto start = std::chrono::steady_clock::now();
  LemmaCase c{r.name, params, samples, seed, 0, detail::kNegInf, 0, 0.0};
  for (std::size_t s = 0; s < samples; ++s) {
    rng::Stream stream(rng::hash({seed, s}));
    const auto out = r.sample(params, stream);
    if (!out.hypothesis_met) ++c.hypothesis_unmet;
    if (std::isnan(out.margin) || out.margin > out.tol) ++c.violations;
    if (std::isnan(out.margin) || out.margin > c.worst_margin) c.worst_margin = out.margin;
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return c;
}

}  // namespace

std::vector<std::string> scalar_lemma_names() {
  std::vector<std::string> out;
  for (const auto& r : detail::scalar_registry()) out.push_back(r.name);
  return out;
}

std::vector<std::string> norm_lemma_names() {
  std::vector<std::string> out;
  for (const auto& r : detail::norm_registry()) out.push_back(r.name);
  return out;
}

bool is_scalar_lemma(std::string_view name) {
  const auto names = scalar_lemma_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

bool is_norm_lemma(std::string_view name) {
  const auto names = norm_lemma_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ParamMap resolve_params(std::string_view name, const ParamMap& overrides) {
  const auto& r = lookup(name, true, true);
  auto params = merge(r, overrides);
  r.check(params);
  return params;
}

LemmaCase verify_scalar_lemma(std::string_view name, const ParamMap& params, std::size_t samples, std::uint64_t seed) {
  return run_registered(lookup(name, true, false), params, samples, seed);
}

LemmaCase verify_norm_lemma(std::string_view name, const ParamMap& params, std::size_t samples, std::uint64_t seed) {
  return run_registered(lookup(name, false, true), params, samples, seed);
}

LemmaCase verify_lemma(std::string_view name, const ParamMap& params, std::size_t samples, std::uint64_t seed) {
  return run_registered(lookup(name, true, true), params, samples, seed);
}

std::vector<LemmaCase> run_suite(std::span<const LemmaSpec> specs, std::uint64_t seed) {
  std::vector<LemmaCase> out(specs.size());
  for_chunks(specs.size(), 1, [&](std::size_t b, std::size_t, std::size_t) {
    const auto& s = specs[b];
    out[b] = verify_lemma(s.name, s.params, s.samples, rng::hash({seed, b}));
  });
  return out;
}

std::string params_digest(const ParamMap& params) {
  std::string out;
  char buf[64];
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    std::snprintf(buf, sizeof buf, "%.6g", v);
    out += k + "=" + buf;
  }
  return out;
}

std::string log_sum_dual_summary(std::span<const LemmaCase> cases) {
  auto describe = [&](std::string_view name, std::string_view rhs) {
    std::size_t runs = 0;
    std::size_t violations = 0;
    double worst = detail::kNegInf;
    for (const auto& c : cases) {
      if (c.name != name) continue;
      ++runs;
      violations += c.violations;
      worst = std::max(worst, c.worst_margin);
    }
    char buf[256];
    if (runs == 0) {
      std::snprintf(buf, sizeof buf, "%s: not run", std::string(rhs).c_str());
    } else {
      std::snprintf(buf, sizeof buf, "%s: %s (%zu violations, worst ln-ratio %.6g)", std::string(rhs).c_str(),
                    violations == 0 ? "holds" : "fails", violations, worst);
    }
    return std::string(buf);
  };
  return "log-sum bound, (6/delta) exp{(1/delta)^(1/(sigma-1))} " + describe("log_sum", "[tight]") +
         "; (6/delta) exp{(2/delta)^(1/(sigma-1))} " + describe("log_sum_proof", "[loose]");
}

}  // namespace kamnf::verify
