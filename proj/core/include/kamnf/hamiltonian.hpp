#pragma once

#include <complex>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "kamnf/lattice.hpp"

namespace kamnf::ham {

using lattice::LatticeParams;
using lattice::Mode;
using lattice::MultiIndex;
using Complex = std::complex<double>;

inline constexpr double kZeroCoeff = 1e-300;

// I(0)^a q^k qbar^k_bar times J-factors over `j` (sorted, at most two).
struct TermKey {
  MultiIndex a;
  MultiIndex k;
  MultiIndex k_bar;
  std::vector<Mode> j;

  [[nodiscard]] int degree() const {
    return 2 * a.total() + k.total() + k_bar.total() + 2 * static_cast<int>(j.size());
  }
  [[nodiscard]] TermKey conjugate() const { return {a, k_bar, k, j}; }
  [[nodiscard]] bool resonant() const { return k == k_bar; }
  [[nodiscard]] int sup_radius() const;

  friend auto operator<=>(const TermKey&, const TermKey&) = default;
  friend bool operator==(const TermKey&, const TermKey&) = default;
};

TermKey make_key(MultiIndex a, MultiIndex k, MultiIndex k_bar, std::vector<Mode> j = {});

struct HamParams {
  LatticeParams lattice;
  double r = 1.0;
  int degree_cap = 8;
  int mode_radius = 2;

  void validate() const;
  friend bool operator==(const HamParams&, const HamParams&) = default;
};

using TermEntry = std::pair<TermKey, Complex>;

class Hamiltonian {
 public:
  using Map = std::map<TermKey, Complex>;

  Hamiltonian() = default;
  explicit Hamiltonian(HamParams params);

  // Stable-sorts by key, sums equal keys in input order, drops zeros.
  static Hamiltonian from_entries(HamParams params, std::vector<TermEntry> entries,
                                  bool enforce_caps = true);

  [[nodiscard]] const HamParams& params() const { return params_; }
  [[nodiscard]] const Map& terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] bool empty() const { return terms_.empty(); }
  [[nodiscard]] Complex coeff(const TermKey& key) const;
  [[nodiscard]] int max_degree() const;
  [[nodiscard]] double error_budget() const { return error_budget_; }

  void add(const TermKey& key, Complex c);
  void add_error(double e) { error_budget_ += e; }
  void set_error(double e) { error_budget_ = e; }

  [[nodiscard]] Map::const_iterator begin() const { return terms_.begin(); }
  [[nodiscard]] Map::const_iterator end() const { return terms_.end(); }

  [[nodiscard]] std::vector<TermEntry> entries() const { return {terms_.begin(), terms_.end()}; }

 private:
  void check_key(const TermKey& key) const;

  HamParams params_{};
  Map terms_;
  double error_budget_ = 0.0;
};

void require_same_params(const Hamiltonian& x, const Hamiltonian& y);

Hamiltonian linear_combine(Complex c1, const Hamiltonian& h1, Complex c2, const Hamiltonian& h2);

// Largest |coeff(a,k,k_bar,j) - conj(coeff(a,k_bar,k,j))|.
double reality_defect(const Hamiltonian& h);

// Largest coefficient magnitude of h1 - h2.
double max_abs_difference(const Hamiltonian& h1, const Hamiltonian& h2);

}  // namespace kamnf::ham
