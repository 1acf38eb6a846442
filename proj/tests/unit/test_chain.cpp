#include "chainglue/chain.hpp"

#include "gen.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>

using namespace chainglue;

namespace {

std::vector<double> sorted_eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

// Reverses the site order of a basis index.
Eigen::Index reflect_index(Eigen::Index i, int n) {
  Eigen::Index out = 0;
  for (int s = 0; s < n; ++s) out |= ((i >> s) & 1) << (n - 1 - s);
  return out;
}

}  // namespace

TEST(LocalTerm, IsingZZIsTensorProduct) {
  const double j[] = {-1.0};
  const LocalTerm t = build_local_term(TermKind::ising_zz, j, 0, 2);
  const Matrix expected = -testgen::kron_loops(testgen::pauli_z(), testgen::pauli_z());
  EXPECT_LT((Matrix(t.matrix) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LocalTerm, FieldOnTwoSitesHasFullWeights) {
  const double h[] = {-1.5};
  const LocalTerm t = build_local_term(TermKind::field_x, h, 0, 2);
  const Matrix x = testgen::pauli_x();
  const Matrix id = Matrix::Identity(2, 2);
  const Matrix expected = -1.5 * (testgen::kron_loops(x, id) + testgen::kron_loops(id, x));
  EXPECT_LT((Matrix(t.matrix) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LocalTerm, FieldTermsSumToUniformField) {
  // Three-site chain assembled from bond terms against the site-by-site sum.
  const double h[] = {-1.5};
  std::vector<LocalTerm> terms{build_local_term(TermKind::field_x, h, 0, 3),
                               build_local_term(TermKind::field_x, h, 1, 3)};
  const ChainHamiltonian c = assemble_chain(terms, 3, false);
  Matrix direct = Matrix::Zero(8, 8);
  for (int s = 0; s < 3; ++s) direct += -1.5 * testgen::site_op(testgen::pauli_x(), s, 3);
  EXPECT_LT((c.dense - direct).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(LocalTerm, CustomNonHermitianRejected) {
  std::array<double, 16> m{};
  m[1] = 1.0;  // (0,1) set, (1,0) not
  EXPECT_THROW(build_local_term(TermKind::custom, m, 0, 2), std::invalid_argument);
}

TEST(LocalTerm, WrongParameterCountRejected) {
  const double two[] = {1.0, 2.0};
  EXPECT_THROW(build_local_term(TermKind::ising_zz, two, 0, 2), std::invalid_argument);
}

TEST(AssembleChain, SingleZZSpectrum) {
  const double j[] = {-1.0};
  const ChainHamiltonian c = assemble_chain({build_local_term(TermKind::ising_zz, j, 0, 2)}, 2, false);
  const auto ev = sorted_eigenvalues(c.dense);
  const std::vector<double> expected{-1, -1, 1, 1};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(ev[i], expected[i], 1e-12);
}

TEST(AssembleChain, EmptyTermsGiveZero) {
  const ChainHamiltonian c = assemble_chain({}, 2, false);
  EXPECT_EQ(c.dense.cwiseAbs().maxCoeff(), 0.0);
}

TEST(AssembleChain, ShiftPutsGroundAtZero) {
  const ChainHamiltonian c = tfim_chain(2, 1.0, 1.5, true);
  EXPECT_NEAR(sorted_eigenvalues(c.dense)[0], 0.0, 1e-10);
  EXPECT_LT((c.raw() - testgen::tfim_direct(2, 1.0, 1.5)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(AssembleChain, OverCapIsResourceError) {
  EXPECT_THROW(tfim_chain(5, 1.0, 1.5, false, 4), ResourceLimitError);
}

TEST(AssembleChain, TermOutsideChainRejected) {
  const double j[] = {1.0};
  EXPECT_THROW(assemble_chain({build_local_term(TermKind::ising_zz, j, 2, 4)}, 3, false),
               std::invalid_argument);
}

TEST(AssembleChain, TfimMatchesSiteBySiteConstruction) {
  for (int n = 2; n <= 6; ++n) {
    const ChainHamiltonian c = tfim_chain(n, 1.0, 1.5, false);
    EXPECT_LT((c.dense - testgen::tfim_direct(n, 1.0, 1.5)).cwiseAbs().maxCoeff(), 1e-12) << n;
  }
}

TEST(AssembleChain, HeisenbergMatchesSiteBySiteConstruction) {
  const int n = 4;
  const ChainHamiltonian c = heisenberg_chain(n, 0.7, 0.3, 0.2, false);
  Matrix direct = Matrix::Zero(16, 16);
  for (int s = 0; s + 1 < n; ++s) {
    for (const Matrix& p : {testgen::pauli_x(), testgen::pauli_y(), testgen::pauli_z()}) {
      direct += 0.7 * testgen::site_op(p, s, n) * testgen::site_op(p, s + 1, n);
    }
  }
  for (int s = 0; s < n; ++s) {
    direct += 0.3 * testgen::site_op(testgen::pauli_z(), s, n) +
              0.2 * testgen::site_op(testgen::pauli_x(), s, n);
  }
  EXPECT_LT((c.dense - direct).cwiseAbs().maxCoeff(), 1e-12);
}

// Property: every builder yields a Hermitian matrix.
TEST(AssembleChainProperty, RandomTermListsAreHermitian) {
  auto g = testgen::rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = testgen::uniform_int(g, 2, 6);
    std::vector<LocalTerm> terms;
    for (int s = 0; s + 1 < n; ++s) {
      const Matrix h = testgen::hermitian(g, 4);
      std::vector<double> p;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          p.push_back(h(i, j).real());
          p.push_back(h(i, j).imag());
        }
      terms.push_back(build_local_term(TermKind::custom, p, s, n));
      const double f[] = {testgen::uniform(g, -2, 2)};
      terms.push_back(build_local_term(TermKind::field_z, f, s, n));
    }
    const ChainHamiltonian c = assemble_chain(terms, n, testgen::uniform_int(g, 0, 1) == 1);
    EXPECT_LT(hermiticity_defect(c.dense), 1e-12);
  }
}

// Property: the spectrum of a translation-invariant open chain is invariant
// under reflecting the sites.
TEST(AssembleChainProperty, ReflectionPreservesSpectrum) {
  auto g = testgen::rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = testgen::uniform_int(g, 2, 6);
    const ChainHamiltonian c = heisenberg_chain(n, testgen::uniform(g, -1, 1),
                                                testgen::uniform(g, -1, 1),
                                                testgen::uniform(g, -1, 1), false);
    const Eigen::Index d = c.dense.rows();
    Matrix reflected(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        reflected(reflect_index(i, n), reflect_index(j, n)) = c.dense(i, j);
    const auto a = sorted_eigenvalues(c.dense);
    const auto b = sorted_eigenvalues(reflected);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-10);
    // For this family the reflected operator is the operator itself.
    EXPECT_LT((reflected - c.dense).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(EmbedOperator, IdentityStaysIdentity) {
  const Matrix e = embed_operator(Matrix::Identity(4, 4), {2, 3}, 5);
  EXPECT_LT((e - Matrix::Identity(32, 32)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EmbedOperator, SigmaZOnFirstSite) {
  const Matrix e = embed_operator(testgen::pauli_z(), {0, 0}, 2);
  const Matrix expected = testgen::kron_loops(testgen::pauli_z(), Matrix::Identity(2, 2));
  EXPECT_LT((e - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EmbedOperator, DimensionMismatchRejected) {
  EXPECT_THROW(embed_operator(Matrix::Identity(2, 2), {0, 1}, 3), DimensionError);
  EXPECT_THROW(embed_operator(Matrix::Identity(2, 2), {3, 3}, 3), std::invalid_argument);
}

TEST(EmbedOperatorProperty, MultiplicativeAndUnital) {
  auto g = testgen::rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = testgen::uniform_int(g, 2, 6);
    const int lo = testgen::uniform_int(g, 0, n - 2);
    const SupportInterval s{lo, lo + 1};
    const Matrix a = testgen::gaussian_matrix(g, 4);
    const Matrix b = testgen::gaussian_matrix(g, 4);
    const Matrix lhs = embed_operator(a, s, n) * embed_operator(b, s, n);
    EXPECT_LT((lhs - embed_operator(a * b, s, n)).cwiseAbs().maxCoeff(), 1e-12);
    // Independent construction by explicit Kronecker loops.
    const Matrix left = Matrix::Identity(dim_of(lo), dim_of(lo));
    const Matrix right = Matrix::Identity(dim_of(n - lo - 2), dim_of(n - lo - 2));
    const Matrix direct = testgen::kron_loops(testgen::kron_loops(left, a), right);
    EXPECT_LT((embed_operator(a, s, n) - direct).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(PartialTrace, ProductStateKeepsFactor) {
  Vector psi = Vector::Zero(4);
  psi(0) = 1.0;
  const Matrix rho = psi * psi.adjoint();
  const Matrix r = partial_trace(rho, {0, 0}, 2);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  EXPECT_LT((r - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PartialTrace, BellStateIsMaximallyMixed) {
  Vector psi = Vector::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  const Matrix r = partial_trace(psi * psi.adjoint(), {0, 0}, 2);
  EXPECT_LT((r - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PartialTrace, MatchesIndexSummation) {
  auto g = testgen::rng(14);
  const Vector psi = testgen::state(g, 8);
  const Matrix r = partial_trace(psi * psi.adjoint(), {0, 1}, 3);
  // rho_{ab} = sum_c psi(a, c) conj(psi(b, c)) with c the last qubit.
  Matrix oracle = Matrix::Zero(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 2; ++c) oracle(a, b) += psi(2 * a + c) * std::conj(psi(2 * b + c));
  EXPECT_LT((r - oracle).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((reduced_density(psi, {0, 1}, 3) - oracle).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(PartialTraceProperty, PreservesTraceAndPositivity) {
  auto g = testgen::rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = testgen::uniform_int(g, 2, 5);
    const int lo = testgen::uniform_int(g, 0, n - 1);
    const int hi = testgen::uniform_int(g, lo, n - 1);
    const Matrix rho = testgen::density(g, dim_of(n));
    const Matrix r = partial_trace(rho, {lo, hi}, n);
    EXPECT_NEAR(r.trace().real(), 1.0, 1e-10);
    EXPECT_NEAR(r.trace().imag(), 0.0, 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(r, Eigen::EigenvaluesOnly);
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
  }
}
