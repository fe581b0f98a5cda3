#pragma once

#include <map>

#include "kamnf/diophantine.hpp"
#include "kamnf/hamiltonian.hpp"
#include "kamnf/homological.hpp"

namespace kamnf::nls {

struct NlsConfig {
  int d = 1;
  int mode_radius = 1;
  double epsilon = 1e-6;
  int sign = 1;
  double sigma = 2.5;
  double r = 1.0;
  double floor_const = 1024.0;
  int degree_cap = 8;
  bool physical_multiplicity = false;

  void validate() const;
  [[nodiscard]] ham::HamParams ham_params() const;
};

// epsilon / (2 pi)^d
double quartic_coefficient(double epsilon, int d);

ham::Hamiltonian build_cubic_nls(const NlsConfig& cfg);

homological::NormalForm build_normal_form(const NlsConfig& cfg, const dioph::FrequencyVector& omega);

}  // namespace kamnf::nls
