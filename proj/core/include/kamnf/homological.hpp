#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>

#include "kamnf/diophantine.hpp"
#include "kamnf/hamiltonian.hpp"

namespace kamnf::homological {

using ham::Hamiltonian;
using ham::HamParams;
using ham::TermKey;
using lattice::Mode;
using lattice::MultiIndex;

struct NormalForm {
  double v_breve = 0.0;
  std::map<Mode, double> v_hat;

  [[nodiscard]] double hat(const Mode& n) const;
  [[nodiscard]] double omega(const Mode& n) const;
};

// Sum over n of (k_n - k_bar_n)(|n|^2 + V_n); the constant shift enters through the mass defect only.
double divisor(const MultiIndex& k, const MultiIndex& k_bar, const NormalForm& nf);

// base * prod 1/(1 + |l_n|^3 <n>^(d+4)) with l = k - k_bar.
double guard_threshold(const MultiIndex& k, const MultiIndex& k_bar, double base, int d);

// Sum of weights of the sorted system beyond its two largest entries.
double tail_weight(const TermKey& key, const lattice::LatticeParams& p);

// sum_n Omega_n q_n qbar_n over the truncated modes.
Hamiltonian normal_form_hamiltonian(const NormalForm& nf, const HamParams& p);

struct DivisorStats {
  double min_divisor = std::numeric_limits<double>::infinity();
  double min_ratio_to_guard = std::numeric_limits<double>::infinity();
  std::size_t below_flat_guard = 0;
  std::size_t eliminated = 0;
  std::size_t resonant = 0;
  std::size_t deferred = 0;
  double deferred_mass = 0.0;
  std::size_t quadratic_nonresonant = 0;
};

struct HomologicalSolution {
  Hamiltonian f0;
  Hamiltonian f1;
  Hamiltonian resonant0;
  Hamiltonian resonant1;
  Hamiltonian deferred0;
  Hamiltonian deferred1;
  Hamiltonian eliminated0;
  Hamiltonian eliminated1;
  DivisorStats stats;
};

struct SolveOptions {
  double guard_base = 0.0;
  double budget = std::numeric_limits<double>::infinity();
  double rho = 0.0;  // star index for deferred mass
};

HomologicalSolution solve_homological(const Hamiltonian& r0, const Hamiltonian& r1, const NormalForm& nf,
                                      const SolveOptions& opts);

// ||{N,F} + R0' + R1'||* / ||R0 + R1||* at rho, primes being the eliminated parts.
double homological_residual(const HomologicalSolution& sol, const Hamiltonian& r0, const Hamiltonian& r1,
                            const NormalForm& nf, double rho);

}  // namespace kamnf::homological
