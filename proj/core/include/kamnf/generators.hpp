#pragma once

#include "kamnf/algebra.hpp"
#include "kamnf/hamiltonian.hpp"
#include "kamnf/rng.hpp"

namespace kamnf::gen {

struct HamiltonianLaw {
  int terms = 6;
  int min_degree = 2;
  int max_degree = 4;
  int max_actions = 1;
  bool mass_conserving = true;
  double coeff_radius = 1.0;
};

// Expanded, momentum-conserving, coefficients uniform in the disk of coeff_radius.
ham::Hamiltonian random_hamiltonian(const ham::HamParams& params, const HamiltonianLaw& law, rng::Stream& stream);

// Random point with |q_n| <= scale * exp(-rho w_n) on the truncated modes.
ham::StatePoint random_point(const ham::HamParams& params, double rho, double scale, rng::Stream& stream);

struct GapSample {
  lattice::MultiIndex a;
  lattice::MultiIndex k;
  lattice::MultiIndex k_bar;
};

// Modes with log-uniform norms up to max_norm; the last mode repairs momentum.
GapSample random_gap_sample(int d, int max_norm, int max_factors, rng::Stream& stream);

}  // namespace kamnf::gen
