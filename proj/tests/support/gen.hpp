#pragma once

// Seeded generators and small reference implementations for tests. Nothing
// here calls into the library except for types.

#include "chainglue/linalg.hpp"

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace testgen {

using chainglue::cplx;
using chainglue::Matrix;
using chainglue::Vector;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed * 0x9E3779B97F4A7C15ULL + 1); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline int uniform_int(std::mt19937_64& g, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(g);
}

inline Matrix gaussian_matrix(std::mt19937_64& g, Eigen::Index d) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) m(i, j) = cplx(n(g), n(g));
  return m;
}

inline Matrix hermitian(std::mt19937_64& g, Eigen::Index d) {
  const Matrix a = gaussian_matrix(g, d);
  return 0.5 * (a + a.adjoint());
}

/// QR of a Ginibre matrix with the phase fix, so the result is Haar.
inline Matrix unitary(std::mt19937_64& g, Eigen::Index d) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(g, d));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Eigen::Index i = 0; i < d; ++i) {
    const cplx p = r(i, i) / std::abs(r(i, i));
    q.col(i) *= p;
  }
  return q;
}

inline Vector state(std::mt19937_64& g, Eigen::Index d) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = cplx(n(g), n(g));
  return v / v.norm();
}

inline Matrix density(std::mt19937_64& g, Eigen::Index d) {
  const Matrix a = gaussian_matrix(g, d);
  Matrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

/// Kronecker product by explicit index loops.
inline Matrix kron_loops(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Single-site operator on `site` of an n-site chain, site 0 most significant.
inline Matrix site_op(const Matrix& op, int site, int n) {
  Matrix out = Matrix::Identity(1, 1);
  for (int s = 0; s < n; ++s) {
    out = kron_loops(out, s == site ? op : Matrix(Matrix::Identity(2, 2)));
  }
  return out;
}

inline Matrix pauli_x() { Matrix m(2, 2); m << 0, 1, 1, 0; return m; }
inline Matrix pauli_z() { Matrix m(2, 2); m << 1, 0, 0, -1; return m; }
inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

/// -J sum Z_j Z_{j+1} - h sum X_j, built site by site.
inline Matrix tfim_direct(int n, double j, double h) {
  const Eigen::Index d = Eigen::Index(1) << n;
  Matrix out = Matrix::Zero(d, d);
  for (int s = 0; s + 1 < n; ++s) out -= j * site_op(pauli_z(), s, n) * site_op(pauli_z(), s + 1, n);
  for (int s = 0; s < n; ++s) out -= h * site_op(pauli_x(), s, n);
  return out;
}

/// Power-series exponential with scaling and squaring; adequate for the
/// small, well-conditioned arguments used in tests.
inline Matrix expm_series(const Matrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.25) {
    scale *= 0.5;
    ++squarings;
  }
  const Matrix x = a * scale;
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

/// Largest singular value via JacobiSVD.
inline double spectral_norm(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace testgen
