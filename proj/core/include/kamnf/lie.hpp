#pragma once

#include <vector>

#include "kamnf/hamiltonian.hpp"

namespace kamnf::ham {

struct LieOptions {
  int order_cap = 6;
  double tail_tol = 1e-30;
  double rho = 0.0;        // star-norm index for term sizes and dropped mass
  double delta = 0.0;      // > 0 evaluates the flow smallness hypothesis
  bool truncate = false;   // drop brackets above degree_cap and bound them
};

struct LieResult {
  Hamiltonian value;
  double tail_bound = 0.0;
  double dropped_bound = 0.0;
  int orders = 0;
  std::vector<double> term_norms;
  bool smallness_holds = true;
};

// sum_{m>=1} ad_F^m(x) / (m + shift)!, ad_F(y) = {y, F}.
LieResult lie_chain(const Hamiltonian& x, const Hamiltonian& f, const LieOptions& opts, int shift = 0);

// h composed with the time-1 flow of f.
LieResult lie_transform(const Hamiltonian& h, const Hamiltonian& f, const LieOptions& opts);

}  // namespace kamnf::ham
