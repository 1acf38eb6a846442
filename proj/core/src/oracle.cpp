#include "chainglue/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace chainglue {

namespace {

template <class M>
EigenDecomposition solve_hermitian(const M& h) {
  Eigen::SelfAdjointEigenSolver<M> es(h);
  if (es.info() != Eigen::Success) {
    const double residual =
        (h - es.eigenvectors() *
                 es.eigenvalues().template cast<typename M::Scalar>().asDiagonal() *
                 es.eigenvectors().adjoint())
            .cwiseAbs()
            .maxCoeff();
    throw std::runtime_error("eigendecompose: solver did not converge (reconstruction residual " +
                             std::to_string(residual) + ")");
  }
  EigenDecomposition d;
  d.energies = es.eigenvalues();
  d.vectors = es.eigenvectors().template cast<cplx>();
  d.ground_energy = d.energies(0);
  d.gap = d.energies.size() > 1 ? d.energies(1) - d.energies(0) : 0.0;
  return d;
}

}  // namespace

EigenDecomposition eigendecompose(const Matrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw DimensionError("eigendecompose: expected a non-empty square matrix");
  }
  // Real symmetric input (every stock model) takes the cheaper real solver.
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) return solve_hermitian<RealMatrix>(h.real());
  return solve_hermitian<Matrix>(h);
}

EigenDecomposition eigendecompose(const ChainHamiltonian& h) { return eigendecompose(h.dense); }

GroundAndGap ground_and_gap(const EigenDecomposition& decomp) {
  GroundAndGap g;
  g.ground_energy = decomp.ground_energy;
  g.ground = decomp.ground();
  g.gap = decomp.gap;
  g.degenerate = decomp.gap < kGapTolerance;
  return g;
}

GroundAndGap ground_and_gap(const ChainHamiltonian& h) { return ground_and_gap(eigendecompose(h)); }

void require_gap(const GroundAndGap& g, const std::string& what) {
  if (g.degenerate) {
    throw GapCollapseError(what + ": spectral gap " + std::to_string(g.gap) +
                           " is below the tolerance " + std::to_string(kGapTolerance) +
                           " (ground space is degenerate)");
  }
}

Matrix heisenberg_evolve(const EigenDecomposition& decomp, const Matrix& a, double t) {
  if (a.rows() != decomp.dim() || a.cols() != decomp.dim()) {
    throw DimensionError("heisenberg_evolve: operator dimension mismatch");
  }
  if (t == 0.0) return a;
  const Vector phase = (decomp.energies.cast<cplx>() * (kI * t)).array().exp().matrix();
  Matrix in_eig = decomp.vectors.adjoint() * a * decomp.vectors;
  // (e^{itE} A e^{-itE})_{jk} = e^{it(E_j - E_k)} A_{jk}
  for (Eigen::Index k = 0; k < in_eig.cols(); ++k) {
    for (Eigen::Index j = 0; j < in_eig.rows(); ++j) {
      in_eig(j, k) *= phase(j) * std::conj(phase(k));
    }
  }
  return decomp.vectors * in_eig * decomp.vectors.adjoint();
}

Matrix spectral_function(const EigenDecomposition& decomp, const std::function<cplx(double)>& f) {
  Vector diag(decomp.dim());
  for (Eigen::Index j = 0; j < decomp.dim(); ++j) diag(j) = f(decomp.energies(j));
  return decomp.vectors * diag.asDiagonal() * decomp.vectors.adjoint();
}

Matrix mp_resolvent(const EigenDecomposition& decomp, double omega) {
  if (std::abs(omega - decomp.ground_energy) > 1e-9) {
    throw std::invalid_argument("mp_resolvent: omega " + std::to_string(omega) +
                                " does not match the ground energy " +
                                std::to_string(decomp.ground_energy));
  }
  if (decomp.dim() > 1 && decomp.gap < kGapTolerance) {
    throw GapCollapseError("mp_resolvent: degenerate ground space");
  }
  Vector diag = Vector::Zero(decomp.dim());
  for (Eigen::Index j = 1; j < decomp.dim(); ++j) diag(j) = 1.0 / (omega - decomp.energies(j));
  return decomp.vectors * diag.asDiagonal() * decomp.vectors.adjoint();
}

namespace {

// View a state as a (2^left_sites) x (rest) matrix in row-major index order.
Matrix split_left(const Vector& v, int left_sites, int sites) {
  const Eigen::Index rows = dim_of(left_sites);
  const Eigen::Index cols = dim_of(sites - left_sites);
  Matrix out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = v(r * cols + c);
  }
  return out;
}

double objective(const Matrix& rho, const Vector& phi) { return std::real(phi.dot(rho * phi)); }

}  // namespace

OverlapReport overlap_x(const Vector& omega_m, const Vector& omega_n, int placement, bool optimize,
                        int l, int max_rounds, double rel_tol) {
  const int m = sites_of(omega_m.size());
  const int n = sites_of(omega_n.size());
  if (m > n) throw std::invalid_argument("overlap_x: block larger than the chain");
  if (placement < 0 || placement + m > n) {
    throw std::invalid_argument("overlap_x: block placement outside the chain");
  }
  if (optimize && (l < 1 || 2 * l >= m)) {
    throw std::invalid_argument("overlap_x: boundary width l=" + std::to_string(l) +
                                " must satisfy 1 <= l < m/2 so the boundary regions do not overlap");
  }

  const Matrix rho = reduced_density(omega_n, {placement, placement + m - 1}, n);
  OverlapReport rep;
  rep.m = m;
  rep.n = n;
  rep.boundary_width = l;
  rep.x_prime = objective(rho, omega_m);
  if (!optimize) return rep;

  const Eigen::Index dl = dim_of(l);
  Matrix u = Matrix::Identity(dl, dl);
  Matrix v = Matrix::Identity(dl, dl);
  double current = rep.x_prime;
  rep.history.push_back(current);

  auto apply_left = [&](const Matrix& op, const Vector& s) { return apply_local(s, op, 0, m); };
  auto apply_right = [&](const Matrix& op, const Vector& s) { return apply_local(s, op, m - l, m); };

  for (int round = 0; round < max_rounds; ++round) {
    const double before = current;
    {
      // Left update: phi = (U (x) I) omega_v, gradient X Omega_v^dagger.
      const Vector omega_v = apply_right(v, omega_m);
      const Vector phi = apply_left(u, omega_v);
      const Matrix x = split_left(rho * phi, l, m);
      const Matrix g = x * split_left(omega_v, l, m).adjoint();
      u = polar_unitary(g);
      current = objective(rho, apply_left(u, omega_v));
      rep.history.push_back(current);
    }
    {
      // Right update on the last l sites: reshape as (rest x 2^l).
      const Vector omega_u = apply_left(u, omega_m);
      const Vector phi = apply_right(v, omega_u);
      const Matrix x = split_left(rho * phi, m - l, m);
      const Matrix ou = split_left(omega_u, m - l, m);
      const Matrix g = (ou.adjoint() * x).transpose();
      v = polar_unitary(g);
      current = objective(rho, apply_right(v, omega_u));
      rep.history.push_back(current);
    }
    rep.rounds = round + 1;
    if (std::abs(current - before) <= rel_tol * std::max(std::abs(before), 1e-300)) break;
  }
  rep.optimized_x = current;
  return rep;
}

namespace {

void put_u64(std::ofstream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes.data(), 8);
}

void put_f64(std::ofstream& out, double d) { put_u64(out, std::bit_cast<std::uint64_t>(d)); }

std::uint64_t get_u64(std::ifstream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), 8);
  if (!in) throw std::runtime_error("load_decomposition: truncated file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[static_cast<std::size_t>(i)];
  return v;
}

double get_f64(std::ifstream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void save_decomposition(const EigenDecomposition& decomp, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_decomposition: cannot open " + path.string());
  put_u64(out, static_cast<std::uint64_t>(decomp.vectors.rows()));
  put_u64(out, static_cast<std::uint64_t>(decomp.vectors.cols()));
  for (Eigen::Index j = 0; j < decomp.energies.size(); ++j) put_f64(out, decomp.energies(j));
  for (Eigen::Index c = 0; c < decomp.vectors.cols(); ++c) {
    for (Eigen::Index r = 0; r < decomp.vectors.rows(); ++r) {
      put_f64(out, decomp.vectors(r, c).real());
      put_f64(out, decomp.vectors(r, c).imag());
    }
  }
  if (!out) throw std::runtime_error("save_decomposition: write failed for " + path.string());
}

EigenDecomposition load_decomposition(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_decomposition: cannot open " + path.string());
  const auto rows = static_cast<Eigen::Index>(get_u64(in));
  const auto cols = static_cast<Eigen::Index>(get_u64(in));
  if (rows <= 0 || rows != cols || rows > (Eigen::Index{1} << 20)) {
    throw std::runtime_error("load_decomposition: bad header in " + path.string());
  }
  EigenDecomposition d;
  d.energies.resize(rows);
  for (Eigen::Index j = 0; j < rows; ++j) d.energies(j) = get_f64(in);
  d.vectors.resize(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = get_f64(in);
      const double im = get_f64(in);
      d.vectors(r, c) = cplx(re, im);
    }
  }
  d.ground_energy = d.energies(0);
  d.gap = rows > 1 ? d.energies(1) - d.energies(0) : 0.0;
  return d;
}

}  // namespace chainglue
