#include "chainglue/chain.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace chainglue {

namespace {

constexpr double kHermitianTolerance = 1e-12;

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  }
  return out;
}

void expect_params(std::span<const double> params, std::size_t count, const char* kind) {
  if (params.size() != count) {
    throw std::invalid_argument(std::string("build_local_term: ") + kind + " expects " +
                                std::to_string(count) + " parameter(s), got " +
                                std::to_string(params.size()));
  }
}

}  // namespace

void validate_support(const SupportInterval& s, int n) {
  if (s.lo < 0 || s.lo > s.hi || s.hi >= n) {
    throw std::invalid_argument("support [" + std::to_string(s.lo) + "," + std::to_string(s.hi) +
                                "] invalid for a chain of " + std::to_string(n) + " sites");
  }
}

LocalTerm build_local_term(TermKind kind, std::span<const double> params, int site, int n_sites) {
  if (site < 0) throw std::invalid_argument("build_local_term: negative site index");
  LocalTerm term;
  term.site_index = site;
  const Eigen::Matrix2cd id = pauli::identity();

  switch (kind) {
    case TermKind::ising_zz:
      expect_params(params, 1, "ising_zz");
      term.matrix = params[0] * kron2(pauli::z(), pauli::z());
      term.label = "zz";
      break;
    case TermKind::heisenberg:
      expect_params(params, 1, "heisenberg");
      term.matrix = params[0] * (kron2(pauli::x(), pauli::x()) + kron2(pauli::y(), pauli::y()) +
                                 kron2(pauli::z(), pauli::z()));
      term.label = "heisenberg";
      break;
    case TermKind::field_x:
    case TermKind::field_z: {
      expect_params(params, 1, kind == TermKind::field_x ? "field_x" : "field_z");
      if (n_sites < 2 || site > n_sites - 2) {
        throw std::invalid_argument("build_local_term: field bond " + std::to_string(site) +
                                    " does not fit a chain of " + std::to_string(n_sites));
      }
      const Eigen::Matrix2cd p = kind == TermKind::field_x ? pauli::x() : pauli::z();
      const double w_left = site == 0 ? 1.0 : 0.5;
      const double w_right = site + 1 == n_sites - 1 ? 1.0 : 0.5;
      term.matrix = params[0] * (w_left * kron2(p, id) + w_right * kron2(id, p));
      term.label = kind == TermKind::field_x ? "x" : "z";
      break;
    }
    case TermKind::custom: {
      if (params.size() == 16) {
        for (int i = 0; i < 16; ++i) term.matrix(i / 4, i % 4) = params[static_cast<std::size_t>(i)];
      } else if (params.size() == 32) {
        for (int i = 0; i < 16; ++i) {
          const auto k = static_cast<std::size_t>(2 * i);
          term.matrix(i / 4, i % 4) = cplx(params[k], params[k + 1]);
        }
      } else {
        throw std::invalid_argument("build_local_term: custom expects 16 or 32 parameters");
      }
      if (!term.matrix.allFinite()) throw std::invalid_argument("build_local_term: non-finite entry");
      const double defect = (term.matrix - term.matrix.adjoint()).cwiseAbs().maxCoeff();
      if (defect > kHermitianTolerance) {
        throw std::invalid_argument("build_local_term: custom matrix is not Hermitian (defect " +
                                    std::to_string(defect) + ")");
      }
      term.label = "custom";
      break;
    }
  }
  return term;
}

Matrix ChainHamiltonian::raw() const {
  return dense + energy_shift * Matrix::Identity(dense.rows(), dense.cols());
}

ChainHamiltonian assemble_chain(std::vector<LocalTerm> terms, int n, bool shift_ground_to_zero,
                                int max_sites) {
  if (n < 2) throw std::invalid_argument("assemble_chain: need at least 2 sites");
  if (n > max_sites) {
    throw ResourceLimitError("assemble_chain: " + std::to_string(n) +
                             " sites exceeds the cap of " + std::to_string(max_sites));
  }
  ChainHamiltonian h;
  h.n = n;
  h.dense = Matrix::Zero(dim_of(n), dim_of(n));
  for (const auto& t : terms) {
    if (t.site_index < 0 || t.site_index > n - 2) {
      throw std::invalid_argument("assemble_chain: term '" + t.label + "' at site " +
                                  std::to_string(t.site_index) + " outside a chain of " +
                                  std::to_string(n));
    }
    if ((t.matrix - t.matrix.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
      throw std::invalid_argument("assemble_chain: term '" + t.label + "' is not Hermitian");
    }
    h.dense += embed_operator(t.matrix, {t.site_index, t.site_index + 1}, n);
  }
  h.terms = std::move(terms);
  if (shift_ground_to_zero) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.dense, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("assemble_chain: eigensolver failed");
    h.energy_shift = es.eigenvalues()(0);
    h.dense.diagonal().array() -= h.energy_shift;
  }
  return h;
}

ChainHamiltonian tfim_chain(int n, double coupling, double field, bool shift_ground_to_zero,
                            int max_sites) {
  if (n > max_sites) {
    throw ResourceLimitError("tfim_chain: " + std::to_string(n) + " sites exceeds the cap of " +
                             std::to_string(max_sites));
  }
  std::vector<LocalTerm> terms;
  const double zz[] = {-coupling};
  const double fx[] = {-field};
  for (int j = 0; j + 1 < n; ++j) {
    terms.push_back(build_local_term(TermKind::ising_zz, zz, j, n));
    terms.push_back(build_local_term(TermKind::field_x, fx, j, n));
  }
  return assemble_chain(std::move(terms), n, shift_ground_to_zero, max_sites);
}

ChainHamiltonian heisenberg_chain(int n, double coupling, double field_z, double field_x,
                                  bool shift_ground_to_zero, int max_sites) {
  if (n > max_sites) {
    throw ResourceLimitError("heisenberg_chain: " + std::to_string(n) +
                             " sites exceeds the cap of " + std::to_string(max_sites));
  }
  std::vector<LocalTerm> terms;
  const double j_param[] = {coupling};
  const double hz[] = {field_z};
  const double hx[] = {field_x};
  for (int j = 0; j + 1 < n; ++j) {
    terms.push_back(build_local_term(TermKind::heisenberg, j_param, j, n));
    if (field_z != 0.0) terms.push_back(build_local_term(TermKind::field_z, hz, j, n));
    if (field_x != 0.0) terms.push_back(build_local_term(TermKind::field_x, hx, j, n));
  }
  return assemble_chain(std::move(terms), n, shift_ground_to_zero, max_sites);
}

Matrix embed_operator(const Matrix& op, const SupportInterval& support, int n) {
  validate_support(support, n);
  if (op.rows() != op.cols() || op.rows() != dim_of(support.width())) {
    throw DimensionError("embed_operator: operator of dimension " + std::to_string(op.rows()) +
                         " does not match support width " + std::to_string(support.width()));
  }
  const Eigen::Index left = dim_of(support.lo);
  const Eigen::Index right = dim_of(n - support.hi - 1);
  Matrix out = kron(Matrix::Identity(left, left), op);
  return kron(out, Matrix::Identity(right, right));
}

Matrix partial_trace(const Matrix& rho, const SupportInterval& keep, int n) {
  validate_support(keep, n);
  if (rho.rows() != dim_of(n) || rho.cols() != dim_of(n)) {
    throw DimensionError("partial_trace: density operator does not match chain size");
  }
  const Eigen::Index left = dim_of(keep.lo);
  const Eigen::Index mid = dim_of(keep.width());
  const Eigen::Index right = dim_of(n - keep.hi - 1);
  Matrix out = Matrix::Zero(mid, mid);
  for (Eigen::Index l = 0; l < left; ++l) {
    for (Eigen::Index r = 0; r < right; ++r) {
      const Eigen::Index base = l * mid * right + r;
      for (Eigen::Index a = 0; a < mid; ++a) {
        for (Eigen::Index b = 0; b < mid; ++b) {
          out(a, b) += rho(base + a * right, base + b * right);
        }
      }
    }
  }
  return out;
}

Matrix reduced_density(const Vector& psi, const SupportInterval& keep, int n) {
  validate_support(keep, n);
  if (psi.size() != dim_of(n)) throw DimensionError("reduced_density: state does not match chain");
  const Eigen::Index left = dim_of(keep.lo);
  const Eigen::Index mid = dim_of(keep.width());
  const Eigen::Index right = dim_of(n - keep.hi - 1);
  Matrix out = Matrix::Zero(mid, mid);
  for (Eigen::Index l = 0; l < left; ++l) {
    // right x mid column-major view of the slab for this left index.
    Eigen::Map<const Matrix> slab(psi.data() + l * mid * right, right, mid);
    out.noalias() += slab.transpose() * slab.conjugate();
  }
  return out;
}

}  // namespace chainglue
