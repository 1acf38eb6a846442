#include "chainglue/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <random>

namespace chainglue {

namespace pauli {
Eigen::Matrix2cd identity() { return Eigen::Matrix2cd::Identity(); }
Eigen::Matrix2cd x() {
  Eigen::Matrix2cd m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
Eigen::Matrix2cd y() {
  Eigen::Matrix2cd m;
  m << 0.0, -kI, kI, 0.0;
  return m;
}
Eigen::Matrix2cd z() {
  Eigen::Matrix2cd m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

Eigen::Index dim_of(int sites) {
  if (sites < 0 || sites > 30) {
    throw DimensionError("dim_of: site count " + std::to_string(sites) + " out of range");
  }
  return Eigen::Index{1} << sites;
}

int sites_of(Eigen::Index dim) {
  if (dim <= 0 || (dim & (dim - 1)) != 0) {
    throw DimensionError("sites_of: dimension " + std::to_string(dim) + " is not a power of two");
  }
  int s = 0;
  while ((Eigen::Index{1} << s) < dim) ++s;
  return s;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double hermitian_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double hermiticity_defect(const Matrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

Matrix polar_unitary(const Matrix& a) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

Matrix expi_hermitian(const Matrix& g, double scale) {
  if (g.rows() > 2 && g.real().cwiseAbs().maxCoeff() == 0.0) {
    // g = iA with A real antisymmetric: exp(i scale g) = exp(-scale A)
    // = cos(scale L) - sinc-type(L) A with L^2 = -A^2, both smooth in L^2.
    const RealMatrix a = g.imag();
    const RealMatrix a2 = a * a;
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (a2 + a2.transpose()));
    if (es.info() != Eigen::Success) throw std::runtime_error("expi_hermitian: eigensolver failed");
    const Eigen::Index d = a.rows();
    RealVector c(d);
    RealVector sn(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const double l = std::sqrt(std::max(0.0, -es.eigenvalues()(i)));
      const double x = scale * l;
      c(i) = std::cos(x);
      sn(i) = x < 1e-4 ? scale * (1.0 - x * x / 6.0) : std::sin(x) / l;
    }
    const RealMatrix& w = es.eigenvectors();
    const RealMatrix cm = w * c.asDiagonal() * w.transpose();
    const RealMatrix sm = w * sn.asDiagonal() * w.transpose();
    return (cm - sm * a).cast<cplx>();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("expi_hermitian: eigensolver failed");
  }
  const Vector phases =
      (es.eigenvalues().cast<cplx>() * (kI * scale)).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double unitarity_defect(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

Vector apply_local(const Vector& state, const Matrix& op, int lo, int n) {
  const int width = sites_of(op.rows());
  if (op.rows() != op.cols()) throw DimensionError("apply_local: operator must be square");
  if (lo < 0 || lo + width > n) throw DimensionError("apply_local: support outside chain");
  if (state.size() != dim_of(n)) throw DimensionError("apply_local: state dimension mismatch");

  const Eigen::Index left = dim_of(lo);
  const Eigen::Index mid = dim_of(width);
  const Eigen::Index right = dim_of(n - lo - width);
  Vector out(state.size());
  // Each left index owns a contiguous (mid x right) row-major slab; as a
  // column-major matrix it is right x mid, so op acts from the right.
  for (Eigen::Index l = 0; l < left; ++l) {
    Eigen::Map<const Matrix> slab(state.data() + l * mid * right, right, mid);
    Eigen::Map<Matrix> dst(out.data() + l * mid * right, right, mid);
    dst.noalias() = slab * op.transpose();
  }
  return out;
}

Matrix embed_with_ancilla(const Matrix& op, int lo, int n) {
  const int width = sites_of(op.rows()) - 1;
  if (width < 0 || lo < 0 || lo + width > n) {
    throw DimensionError("embed_with_ancilla: window outside chain");
  }
  const Eigen::Index wd = dim_of(width);
  const Eigen::Index full = dim_of(n);
  const Matrix left = Matrix::Identity(dim_of(lo), dim_of(lo));
  const Matrix right = Matrix::Identity(dim_of(n - lo - width), dim_of(n - lo - width));
  Matrix out = Matrix::Zero(2 * full, 2 * full);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const Matrix block = op.block(a * wd, b * wd, wd, wd);
      if (block.cwiseAbs().maxCoeff() == 0.0) continue;
      out.block(a * full, b * full, full, full) = kron(kron(left, block), right);
    }
  }
  return out;
}

namespace {
Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = nd(rng);
      const double im = nd(rng);
      m(i, j) = cplx(re, im);
    }
  }
  return m;
}
}  // namespace

Matrix random_hermitian(Eigen::Index dim, std::uint64_t seed) {
  const Matrix g = gaussian_matrix(dim, dim, seed);
  return (g + g.adjoint()) * 0.5;
}

Matrix random_unitary(Eigen::Index dim, std::uint64_t seed) {
  const Matrix g = gaussian_matrix(dim, dim, seed);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    const double ad = std::abs(d);
    if (ad > 0.0) q.col(j) *= d / ad;
  }
  return q;
}

Vector random_state(Eigen::Index dim, std::uint64_t seed) {
  Vector v = gaussian_matrix(dim, 1, seed).col(0);
  return v / v.norm();
}

}  // namespace chainglue
