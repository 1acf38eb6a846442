#include "chainglue/adiabatic.hpp"

#include "gen.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace chainglue;

namespace {

HamiltonianPath tfim_field_path(int n, double h0, double h1) {
  return linear_path(tfim_chain(n, 1.0, h0, false).dense, tfim_chain(n, 1.0, h1, false).dense);
}

// Ground vector of h with phase aligned to `ref`.
Vector aligned_ground(const Matrix& h, const Vector& ref) {
  Vector g = eigendecompose(h).ground();
  const cplx ov = ref.dot(g);
  return g * (std::abs(ov) / ov);
}

// Time-ordered product of exact exponentials for a piecewise constant
// generator, built with the series exponential.
Matrix product_of_exponentials(const GeneratorProvider& p, int steps) {
  const double ds = 1.0 / steps;
  Matrix u = Matrix::Identity(p(0.0).rows(), p(0.0).rows());
  for (int k = 0; k < steps; ++k) u = testgen::expm_series(kI * ds * p((k + 0.5) * ds)) * u;
  return u;
}

}  // namespace

TEST(HamiltonianPath, LinearDerivativeIsConsistent) {
  const auto p = tfim_field_path(3, 1.5, 2.5);
  EXPECT_LT(path_derivative_defect(p, {0.0, 0.3, 1.0}), 1e-9);
  EXPECT_THROW(linear_path(Matrix::Identity(2, 2), Matrix::Identity(4, 4)), DimensionError);
}

TEST(HamiltonianPath, BrokenDerivativeIsDetected) {
  auto p = tfim_field_path(2, 1.0, 2.0);
  p.dH_ds = [](double) -> Matrix { return Matrix::Zero(4, 4); };
  EXPECT_GT(path_derivative_defect(p, {0.5}), 0.5);
}

TEST(Generators, ConstantPathGivesZeroGenerators) {
  const Matrix h = tfim_chain(3, 1.0, 1.5, false).dense;
  const auto p = constant_path(h);
  const auto d = eigendecompose(h);
  const Filter f = Filter::make(FilterKind::gaussian, 1.0);
  EXPECT_EQ(exact_adiabatic_generator(p, 0.5, d).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(qa_generator_spectral(p, 0.5, f, d).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(qa_generator_quadrature(p, 0.5, f, 10.0, 64).generator.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Generators, ExactGeneratorMatchesFiniteDifferenceOfGround) {
  const auto p = tfim_field_path(3, 0.8, 1.6);
  const double s = 0.4;
  const double h = 1e-5;
  const Vector g = eigendecompose(p.H_of_s(s)).ground();
  const Vector fd = (aligned_ground(p.H_of_s(s + h), g) - aligned_ground(p.H_of_s(s - h), g)) / (2 * h);
  const Matrix gen = exact_adiabatic_generator(p, s, eigendecompose(p.H_of_s(s)));
  EXPECT_LT(hermiticity_defect(gen), 1e-12);
  EXPECT_LT((kI * gen * g - fd).norm(), 1e-6);
}

TEST(Generators, TwoLevelRotationClosedForm) {
  // H(s) = -(cos(as) Z + sin(as) X): ground rotates at rate a/2 about Y.
  const double a = 0.9;
  HamiltonianPath p;
  p.H_of_s = [a](double s) -> Matrix {
    return -(std::cos(a * s) * testgen::pauli_z() + std::sin(a * s) * testgen::pauli_x());
  };
  p.dH_ds = [a](double s) -> Matrix {
    return -a * (-std::sin(a * s) * testgen::pauli_z() + std::cos(a * s) * testgen::pauli_x());
  };
  const Matrix gen = exact_adiabatic_generator(p, 0.3, eigendecompose(p.H_of_s(0.3)));
  // i G = -(a/2) i Y, i.e. G = -(a/2) Y.
  EXPECT_LT((gen + 0.5 * a * testgen::pauli_y()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Generators, BumpBelowGapReproducesParallelTransportOnGround) {
  const auto p = tfim_field_path(3, 1.5, 2.5);
  for (double s : {0.0, 0.5, 1.0}) {
    const auto d = eigendecompose(p.H_of_s(s));
    const Filter f = Filter::make(FilterKind::compact_bump, 0.9 * d.gap);
    const Vector g = d.ground();
    const Vector qa = qa_generator_spectral(p, s, f, d) * g;
    const Vector ex = exact_adiabatic_generator(p, s, d) * g;
    EXPECT_LT((qa - ex).norm(), 1e-12) << s;
  }
}

TEST(Generators, QuadratureMatchesSpectralForm) {
  for (int n : {2, 3}) {
    const auto p = tfim_field_path(n, 0.7, 1.4);
    for (double gamma : {0.5, 2.0}) {
      const Filter f = Filter::make(FilterKind::gaussian, gamma);
      const auto d = eigendecompose(p.H_of_s(0.5));
      const Matrix spec = qa_generator_spectral(p, 0.5, f, d);
      const auto quad = qa_generator_quadrature(p, 0.5, f, 10.0 * gamma, 2048);
      EXPECT_LT((spec - quad.generator).cwiseAbs().maxCoeff(), 1e-6) << n << " " << gamma;
      EXPECT_LT(quad.tail_estimate, 1e-15);
    }
  }
}

TEST(GeneratorsProperty, SpectralGeneratorHermitianWithZeroDiagonal) {
  auto g = testgen::rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = testgen::uniform_int(g, 2, 12);
    const Matrix h = testgen::hermitian(g, dim);
    const Matrix dh = testgen::hermitian(g, dim);
    const auto d = eigendecompose(h);
    const Filter f = Filter::make(trial % 2 ? FilterKind::gaussian : FilterKind::compact_bump,
                                  testgen::uniform(g, 0.2, 3.0));
    const Matrix l = qa_generator_spectral(dh, f, d);
    EXPECT_LT(hermiticity_defect(l), 1e-12);
    const Matrix in_basis = d.vectors.adjoint() * l * d.vectors;
    EXPECT_LT(in_basis.diagonal().cwiseAbs().maxCoeff(), 1e-10);
    // Element check against the defining weights.
    const Matrix a = d.vectors.adjoint() * dh * d.vectors;
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        if (j == k) continue;
        const cplx w = filter_kernel_weight(f, d.energies(j) - d.energies(k));
        EXPECT_LT(std::abs(in_basis(j, k) - w * a(j, k)), 1e-9);
      }
  }
}

TEST(Evolve, ConstantGeneratorIsExponential) {
  auto g = testgen::rng(42);
  const Matrix gen = testgen::hermitian(g, 6);
  const GeneratorProvider p = [&](double) { return gen; };
  const Matrix expected = testgen::expm_series(kI * gen);
  for (int steps : {1, 7}) {
    EXPECT_LT((evolve_path(p, {steps, StepOrder::midpoint}) - expected).cwiseAbs().maxCoeff(), 1e-10);
  }
  const Matrix half = evolve_path(p, {4, StepOrder::midpoint}, 0.25, 0.75);
  EXPECT_LT((half - testgen::expm_series(0.5 * kI * gen)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Evolve, MidpointMatchesExplicitProduct) {
  auto g = testgen::rng(43);
  const Matrix a = testgen::hermitian(g, 4);
  const Matrix b = testgen::hermitian(g, 4);
  const GeneratorProvider p = [&](double s) -> Matrix { return a + s * s * b; };
  EXPECT_LT((evolve_path(p, {9, StepOrder::midpoint}) - product_of_exponentials(p, 9)).cwiseAbs().maxCoeff(),
            1e-10);
}

TEST(Evolve, StepHalvingShowsSecondOrderAndRichardsonImproves) {
  auto g = testgen::rng(44);
  const Matrix a = testgen::hermitian(g, 4);
  const Matrix b = testgen::hermitian(g, 4);
  const GeneratorProvider p = [&](double s) -> Matrix { return std::cos(2 * s) * a + s * b; };
  const Matrix ref = evolve_path(p, {4096, StepOrder::midpoint});
  const double e16 = operator_norm(evolve_path(p, {16, StepOrder::midpoint}) - ref);
  const double e32 = operator_norm(evolve_path(p, {32, StepOrder::midpoint}) - ref);
  EXPECT_GT(e16 / e32, 3.5);
  EXPECT_LT(e16 / e32, 4.5);
  const Matrix r = evolve_path(p, {16, StepOrder::richardson});
  EXPECT_LT(operator_norm(r - ref), e32);
  EXPECT_LT(unitarity_defect(r), 1e-12);
}

TEST(Evolve, RejectsNonHermitianGenerator) {
  const GeneratorProvider p = [](double) -> Matrix {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
  };
  EXPECT_THROW(evolve_path(p, {4, StepOrder::midpoint}), std::invalid_argument);
  EXPECT_THROW(evolve_path(p, {0, StepOrder::midpoint}), std::invalid_argument);
}

TEST(Evolve, ConvergedStopsOnceColumnsSettle) {
  auto g = testgen::rng(45);
  const Matrix a = testgen::hermitian(g, 4);
  const GeneratorProvider p = [&](double s) -> Matrix { return s * a; };
  const auto c = evolve_path_converged(p, Matrix::Identity(4, 4), StepOrder::richardson, 1e-10);
  EXPECT_TRUE(c.converged);
  EXPECT_LT(c.last_change, 1e-10);
  // The exact answer commutes through: exp(i a / 2).
  EXPECT_LT((c.unitary - testgen::expm_series(0.5 * kI * a)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(QProjector, MatchesTimeDomainQuadrature) {
  const Matrix h = tfim_chain(2, 1.0, 0.8, false).dense;
  const auto d = eigendecompose(h);
  const Filter f = Filter::make(FilterKind::gaussian, 0.7);
  const QProjector q = q_projector(d, f);
  // Q = integral chi(t) e^{it(H - E0)} dt, composite Simpson on [-10g, 10g].
  const int nodes = 2000;
  const double t_max = 7.0;
  const double step = 2 * t_max / nodes;
  const Matrix shifted = h - d.ground_energy * Matrix::Identity(4, 4);
  Matrix acc = Matrix::Zero(4, 4);
  for (int i = 0; i <= nodes; ++i) {
    const double t = -t_max + i * step;
    const double w = (i == 0 || i == nodes) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * f.chi(t) * testgen::expm_series(kI * t * shifted);
  }
  acc *= step / 3.0;
  EXPECT_LT((q.Q - acc).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR((d.ground().adjoint() * q.Q * d.ground())(0, 0).real(), 1.0, 1e-12);
  EXPECT_NEAR(q.dist, f.chi_hat(d.gap), 1e-15);
}

TEST(Certificate, ConstantPathHasZeroBound) {
  const Matrix h = tfim_chain(3, 1.0, 1.5, false).dense;
  const Filter f = Filter::make(FilterKind::gaussian, 1.0);
  const auto c = error_certificate(constant_path(h), f, {0.0, 0.5, 1.0});
  EXPECT_EQ(c.eta_star, 0.0);
  EXPECT_EQ(c.bound, 0.0);
  const auto m = measure_transport(constant_path(h), f);
  EXPECT_LT(m.error, 1e-12);
}

TEST(Certificate, GapClosureRaises) {
  const auto p = tfim_field_path(3, 0.0, 1.0);
  const Filter f = Filter::make(FilterKind::gaussian, 1.0);
  EXPECT_THROW(error_certificate(p, f, {0.0, 1.0}), GapCollapseError);
  EXPECT_THROW(error_certificate(p, f, {}), std::invalid_argument);
}

TEST(Certificate, ComponentsMatchDirectEvaluation) {
  const auto p = tfim_field_path(3, 1.5, 2.5);
  const Filter f = Filter::make(FilterKind::gaussian, 0.5);
  const auto c = error_certificate(p, f, {0.0, 0.5, 1.0});
  double eta = 0.0;
  double fmax = 0.0;
  for (double s : {0.0, 0.5, 1.0}) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(p.H_of_s(s));
    const Vector g = es.eigenvectors().col(0);
    const Matrix q = Matrix::Identity(8, 8) - g * g.adjoint();
    eta = std::max(eta, (q * p.dH_ds(s) * g).norm());
    for (int j = 1; j < 8; ++j) {
      const double z = es.eigenvalues()(j) - es.eigenvalues()(0);
      fmax = std::max(fmax, std::exp(-0.5 * 0.25 * z * z) / z);
    }
  }
  EXPECT_NEAR(c.eta_star, eta, 1e-10);
  EXPECT_NEAR(c.f_star, fmax, 1e-9);
  EXPECT_NEAR(c.bound, eta * fmax, 1e-9);
}

TEST(Certificate, MeasuredErrorIsDominated) {
  const auto p = tfim_field_path(3, 1.5, 2.5);
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  for (double gamma : {0.25, 0.5}) {
    const Filter f = Filter::make(FilterKind::gaussian, gamma);
    const auto c = error_certificate(p, f, grid);
    const auto m = measure_transport(p, f);
    EXPECT_LE(m.error, c.bound) << gamma;
    EXPECT_LE(m.error, c.integrated_bound + 1e-9) << gamma;
  }
}
