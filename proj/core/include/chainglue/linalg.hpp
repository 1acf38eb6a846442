#pragma once

// Dense complex linear algebra shared by every chainglue module.
//
// Qubit ordering: site 0 is the most significant tensor factor, so an
// operator on sites [lo, hi] of an n-site chain embeds as
// I_{2^lo} (x) op (x) I_{2^(n-hi-1)}.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace chainglue {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr cplx kI{0.0, 1.0};

/// Error raised when a requested chain exceeds the configured size cap.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Error raised when operand dimensions are inconsistent.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace pauli {
Eigen::Matrix2cd identity();
Eigen::Matrix2cd x();
Eigen::Matrix2cd y();
Eigen::Matrix2cd z();
}  // namespace pauli

/// Hilbert-space dimension 2^sites; throws DimensionError for negative or
/// absurdly large site counts.
Eigen::Index dim_of(int sites);

/// log2 of a power-of-two dimension; throws DimensionError otherwise.
int sites_of(Eigen::Index dim);

Matrix kron(const Matrix& a, const Matrix& b);

/// Largest singular value.
double operator_norm(const Matrix& a);

/// Operator norm of a Hermitian matrix via its spectrum (cheaper than SVD).
double hermitian_norm(const Matrix& a);

/// ||A - A^dagger|| in the max-abs-entry sense, scaled for use as a
/// Hermiticity check.
double hermiticity_defect(const Matrix& a);

/// Unitary polar factor U of A = U |A|, via SVD.
Matrix polar_unitary(const Matrix& a);

/// exp(i * scale * G) for Hermitian G, through its spectral decomposition.
Matrix expi_hermitian(const Matrix& g, double scale);

/// ||U^dagger U - I|| (max-abs entry).
double unitarity_defect(const Matrix& u);

/// Apply a local operator on `width` contiguous sites starting at `lo` to a
/// state of `n` sites without forming the embedded matrix.
Vector apply_local(const Vector& state, const Matrix& op, int lo, int n);

/// Embed `op` (on sites lo..lo+k-1) into n sites with an extra leading
/// ancilla factor that `op` also acts on: op lives on (ancilla, window) and
/// the result on (ancilla, chain).
Matrix embed_with_ancilla(const Matrix& op, int lo, int n);

/// Hermitian random matrix with unit-variance entries; deterministic in seed.
Matrix random_hermitian(Eigen::Index dim, std::uint64_t seed);

/// Haar-ish random unitary (QR of a complex Gaussian matrix).
Matrix random_unitary(Eigen::Index dim, std::uint64_t seed);

/// Normalized complex Gaussian random state.
Vector random_state(Eigen::Index dim, std::uint64_t seed);

}  // namespace chainglue
