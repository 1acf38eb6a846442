#pragma once

// Exact diagonalization backend: spectra, gaps, Heisenberg evolution,
// spectral functions, Moore-Penrose resolvents and block overlaps.

#include "chainglue/chain.hpp"
#include "chainglue/linalg.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

namespace chainglue {

/// Gaps below this are treated as a degenerate ground space.
inline constexpr double kGapTolerance = 1e-8;

/// Raised when a construction needs a unique gapped ground state and the
/// spectrum does not provide one.
class GapCollapseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigenDecomposition {
  RealVector energies;  // ascending
  Matrix vectors;       // column j is |E_j>
  double ground_energy = 0.0;
  double gap = 0.0;     // E_1 - E_0, zero for a 1x1 operator

  Eigen::Index dim() const { return energies.size(); }
  Vector ground() const { return vectors.col(0); }
};

/// Full eigendecomposition of a Hermitian matrix. Throws std::runtime_error
/// with the reconstruction residual if the solver does not converge.
EigenDecomposition eigendecompose(const Matrix& h);
EigenDecomposition eigendecompose(const ChainHamiltonian& h);

struct GroundAndGap {
  double ground_energy = 0.0;
  Vector ground;
  double gap = 0.0;
  bool degenerate = false;  // gap < kGapTolerance
};

GroundAndGap ground_and_gap(const EigenDecomposition& decomp);
GroundAndGap ground_and_gap(const ChainHamiltonian& h);

/// Throws GapCollapseError when the ground space is degenerate.
void require_gap(const GroundAndGap& g, const std::string& what);

/// tau_t(A) = e^{itH} A e^{-itH} through the eigenbasis of H.
Matrix heisenberg_evolve(const EigenDecomposition& decomp, const Matrix& a, double t);

/// sum_j f(E_j) |E_j><E_j|.
Matrix spectral_function(const EigenDecomposition& decomp, const std::function<cplx(double)>& f);

/// Moore-Penrose inverse of (omega I - H): annihilates the ground vector and
/// acts as 1/(omega - E_j) on excited eigenvectors. `omega` must equal the
/// ground energy to 1e-9; the ground space must be non-degenerate.
Matrix mp_resolvent(const EigenDecomposition& decomp, double omega);

struct OverlapReport {
  double x_prime = 0.0;
  int m = 0;
  int n = 0;
  int boundary_width = 0;
  std::optional<double> optimized_x;
  std::vector<double> history;  // objective after each half-round (optimize only)
  int rounds = 0;
};

/// x' = <Omega_m| rho^(n)_m |Omega_m>, with the m-site block starting at
/// `placement`. With `optimize`, boundary unitaries on the first and last `l`
/// sites of the block are improved by alternating polar-decomposition ascent.
OverlapReport overlap_x(const Vector& omega_m, const Vector& omega_n, int placement, bool optimize,
                        int l, int max_rounds = 200, double rel_tol = 1e-8);

/// Flat little-endian binary cache of a decomposition:
///   uint64 rows, uint64 cols,
///   rows x float64 energies,
///   rows*cols x (float64 re, float64 im), column-major vectors.
void save_decomposition(const EigenDecomposition& decomp, const std::filesystem::path& path);
EigenDecomposition load_decomposition(const std::filesystem::path& path);

}  // namespace chainglue
