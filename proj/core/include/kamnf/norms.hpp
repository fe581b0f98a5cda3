#pragma once

#include <string_view>

#include "kamnf/hamiltonian.hpp"

namespace kamnf::ham {

enum class NormKind { sup_rho, star_rho, plus_rho };

NormKind parse_norm_kind(std::string_view name);

// sup |c| exp(-rho (S - 2 L1)) over the expanded form.
double sup_norm(const Hamiltonian& h, double rho);
// sum |c| exp(-2 r sum a w - rho sum (k + k_bar) w) over the expanded form.
double star_norm(const Hamiltonian& h, double rho);
// Class-wise sup on the J-collected form, J-modes entering S and L1.
double plus_norm(const Hamiltonian& h, double rho);

double norm(const Hamiltonian& h, NormKind kind, double rho);

// Per-term pieces, exposed for pruning and bounds.
double star_weight(const TermKey& key, const HamParams& p, double rho);
double sup_exponent(const TermKey& key, const LatticeParams& p);

}  // namespace kamnf::ham
