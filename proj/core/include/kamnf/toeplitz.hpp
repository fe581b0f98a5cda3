#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "kamnf/hamiltonian.hpp"

namespace kamnf::kam {

enum class TlFamily { qq, q_qbar, qbar_qbar };
std::string_view family_name(TlFamily f);

struct TlRow {
  TlFamily family;
  int t;
  double defect;
};

struct TlTable {
  std::vector<TlRow> rows;
  int t_limit = 0;
  std::array<double, 3> fitted_c{};
  std::array<bool, 3> non_increasing{true, true, true};
};

// Second derivatives at (n+tl, m-tl), (n+tl, m+tl), (n+tl, m-tl) with the conjugations of each family.
ham::Hamiltonian tl_derivative(const ham::Hamiltonian& h, TlFamily f, const lattice::Mode& n, const lattice::Mode& m,
                               const lattice::Mode& l, int t);

// The largest |t| stands in for the limit; C fitted by least squares of defect on 1/|t| through the origin.
TlTable tl_defect(const ham::Hamiltonian& h, const lattice::Mode& n, const lattice::Mode& m, const lattice::Mode& l,
                  std::span<const int> t_list, double rho);

// All t with every translated mode inside the radius, |t| in [1, t_cap].
std::vector<int> feasible_shifts(const ham::HamParams& p, const lattice::Mode& n, const lattice::Mode& m,
                                 const lattice::Mode& l, int t_cap);

}  // namespace kamnf::kam
