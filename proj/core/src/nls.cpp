#include "kamnf/nls.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kamnf/errors.hpp"

namespace kamnf::nls {

using lattice::Mode;
using lattice::MultiIndex;

void NlsConfig::validate() const {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be > 0, got " + std::to_string(epsilon));
  if (sign != 1 && sign != -1) throw ValidationError("sign must be +1 or -1");
  if (degree_cap < 4) throw ValidationError("degree_cap must be >= 4 for a quartic Hamiltonian");
  ham_params().validate();
}

ham::HamParams NlsConfig::ham_params() const {
  return {{d, sigma, floor_const}, r, degree_cap, mode_radius};
}

double quartic_coefficient(double epsilon, int d) { return epsilon / std::pow(2.0 * std::numbers::pi, d); }

namespace {
struct Pair {
  MultiIndex idx;
  Mode sum;
  int symmetry;  // 2!/prod k_n!
};
}  // namespace

ham::Hamiltonian build_cubic_nls(const NlsConfig& cfg) {
  cfg.validate();
  const auto modes = lattice::truncated_modes(cfg.d, cfg.mode_radius);
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < modes.size(); ++i)
    for (std::size_t j = i; j < modes.size(); ++j) {
      MultiIndex idx;
      idx.add(modes[i], 1);
      idx.add(modes[j], 1);
      pairs.push_back({idx, modes[i] + modes[j], i == j ? 1 : 2});
    }
  const double base = cfg.sign * quartic_coefficient(cfg.epsilon, cfg.d);
  std::vector<ham::TermEntry> entries;
  for (const auto& p : pairs)
    for (const auto& q : pairs) {
      if (!(p.sum == q.sum)) continue;
      const double mult = cfg.physical_multiplicity ? p.symmetry * q.symmetry : 1.0;
      entries.emplace_back(ham::TermKey{{}, p.idx, q.idx, {}}, base * mult);
    }
  return ham::Hamiltonian::from_entries(cfg.ham_params(), std::move(entries));
}

homological::NormalForm build_normal_form(const NlsConfig& cfg, const dioph::FrequencyVector& omega) {
  homological::NormalForm nf;
  for (const auto& m : lattice::truncated_modes(cfg.d, cfg.mode_radius)) {
    auto it = omega.find(m);
    if (it == omega.end()) throw ValidationError("frequency missing at mode " + lattice::to_string(m));
    nf.v_hat[m] = it->second;
  }
  return nf;
}

}  // namespace kamnf::nls
