#pragma once

// Open spin-1/2 chains built from nearest-neighbour (2-local) terms.

#include "chainglue/linalg.hpp"

#include <span>
#include <string>
#include <vector>

namespace chainglue {

/// Default upper bound on the number of chain sites held densely.
inline constexpr int kDefaultMaxSites = 16;

/// Inclusive contiguous site range [lo, hi].
struct SupportInterval {
  int lo = 0;
  int hi = 0;

  int width() const { return hi - lo + 1; }
  bool contains(int site) const { return lo <= site && site <= hi; }
  bool intersects(const SupportInterval& o) const { return lo <= o.hi && o.lo <= hi; }
  SupportInterval hull(const SupportInterval& o) const {
    return {std::min(lo, o.lo), std::max(hi, o.hi)};
  }
  bool operator==(const SupportInterval&) const = default;
};

/// Throws std::invalid_argument unless 0 <= lo <= hi < n.
void validate_support(const SupportInterval& s, int n);

/// A Hermitian 4x4 operator acting on sites (site_index, site_index + 1).
struct LocalTerm {
  int site_index = 0;
  Eigen::Matrix4cd matrix = Eigen::Matrix4cd::Zero();
  std::string label;
};

enum class TermKind { ising_zz, field_x, field_z, heisenberg, custom };

/// Build one bond term.
///
/// * ising_zz   params {J}: J Z(x)Z
/// * heisenberg params {J}: J (XX + YY + ZZ)
/// * field_x / field_z params {h}: h (w_l P(x)I + w_r I(x)P), where the
///   weights are 1 on a chain boundary site and 1/2 on interior sites, so a
///   field term on every bond of an n-site chain sums to h * sum_i P_i.
/// * custom params: 16 reals (real row-major 4x4) or 32 reals (interleaved
///   re/im, row-major); the matrix must be Hermitian to 1e-12.
///
/// `n_sites` is only consulted by the field kinds.
LocalTerm build_local_term(TermKind kind, std::span<const double> params, int site, int n_sites);

/// Dense Hermitian Hamiltonian on n spins plus the terms it was built from.
/// dense == sum(embedded terms) - energy_shift * I.
struct ChainHamiltonian {
  int n = 0;
  std::vector<LocalTerm> terms;
  Matrix dense;
  double energy_shift = 0.0;

  /// sum of embedded terms, without the shift.
  Matrix raw() const;
};

/// Sum the identity-padded terms. With shift_ground_to_zero the lowest
/// eigenvalue is computed and subtracted. Throws ResourceLimitError when
/// n > max_sites.
ChainHamiltonian assemble_chain(std::vector<LocalTerm> terms, int n, bool shift_ground_to_zero,
                                int max_sites = kDefaultMaxSites);

/// Transverse-field Ising chain -J sum Z_j Z_{j+1} - h sum X_j.
ChainHamiltonian tfim_chain(int n, double coupling, double field, bool shift_ground_to_zero,
                            int max_sites = kDefaultMaxSites);

/// Heisenberg chain J sum S_j . S_{j+1} (Pauli normalization) with uniform
/// longitudinal field hz and transverse field hx.
ChainHamiltonian heisenberg_chain(int n, double coupling, double field_z, double field_x,
                                  bool shift_ground_to_zero, int max_sites = kDefaultMaxSites);

/// Identity-pad `op` (acting on `support`) to the full n-site space.
Matrix embed_operator(const Matrix& op, const SupportInterval& support, int n);

/// Reduced density operator on `keep` of an n-site density operator.
Matrix partial_trace(const Matrix& rho, const SupportInterval& keep, int n);

/// Reduced density operator on `keep` of the pure state |psi><psi|, without
/// forming the full projector.
Matrix reduced_density(const Vector& psi, const SupportInterval& keep, int n);

}  // namespace chainglue
