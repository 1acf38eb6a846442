#include "chainglue/adiabatic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chainglue {

namespace {

constexpr double kGeneratorHermiticity = 1e-10;

Matrix make_hermitian(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

void check_gap(const EigenDecomposition& decomp, const char* what) {
  if (decomp.dim() > 1 && decomp.gap < kGapTolerance) {
    throw GapCollapseError(std::string(what) + ": gap " + std::to_string(decomp.gap) +
                           " below tolerance");
  }
}

}  // namespace

HamiltonianPath linear_path(const Matrix& h0, const Matrix& h1) {
  if (h0.rows() != h1.rows() || h0.cols() != h1.cols()) {
    throw DimensionError("linear_path: endpoint dimensions differ");
  }
  HamiltonianPath p;
  p.H_of_s = [h0, h1](double s) -> Matrix { return (1.0 - s) * h0 + s * h1; };
  p.dH_ds = [h0, h1](double) -> Matrix { return h1 - h0; };
  return p;
}

HamiltonianPath constant_path(const Matrix& h0) {
  HamiltonianPath p;
  p.H_of_s = [h0](double) -> Matrix { return h0; };
  p.dH_ds = [h0](double) -> Matrix { return Matrix::Zero(h0.rows(), h0.cols()); };
  return p;
}

double path_derivative_defect(const HamiltonianPath& path, const std::vector<double>& grid,
                              double step) {
  double worst = 0.0;
  for (double s : grid) {
    const double lo = std::max(0.0, s - step);
    const double hi = std::min(1.0, s + step);
    const Matrix fd = (path.H_of_s(hi) - path.H_of_s(lo)) / (hi - lo);
    worst = std::max(worst, (path.dH_ds(s) - fd).cwiseAbs().maxCoeff());
  }
  return worst;
}

Matrix exact_adiabatic_generator(const HamiltonianPath& path, double s,
                                 const EigenDecomposition& decomp) {
  const Matrix dh = path.dH_ds(s);
  if (dh.rows() != decomp.dim()) throw DimensionError("exact_adiabatic_generator: dimension mismatch");
  check_gap(decomp, "exact_adiabatic_generator");
  const Matrix r = mp_resolvent(decomp, decomp.ground_energy);
  const Vector g = decomp.ground();
  const Matrix p = g * g.adjoint();
  // -[P, P'] = R dH P - P dH R is anti-Hermitian; G = -i times it.
  const Matrix x = r * dh * p - p * dh * r;
  return make_hermitian(cplx(0.0, -1.0) * x);
}

Matrix qa_generator_spectral(const Matrix& dh, const Filter& filter,
                             const EigenDecomposition& decomp) {
  if (dh.rows() != decomp.dim()) throw DimensionError("qa_generator_spectral: dimension mismatch");
  const Eigen::Index dim = dh.rows();
  if (dh.imag().cwiseAbs().maxCoeff() == 0.0 && decomp.vectors.imag().cwiseAbs().maxCoeff() == 0.0) {
    // Real eigenbasis: the weights are i q with q odd, so L = i V B V^T with B
    // real antisymmetric.
    const RealMatrix v = decomp.vectors.real();
    RealMatrix b = v.transpose() * dh.real() * v;
    for (Eigen::Index k = 0; k < dim; ++k) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        b(j, k) *= j == k ? 0.0 : filter.kernel_q(decomp.energies(j) - decomp.energies(k));
      }
    }
    RealMatrix l = v * b * v.transpose();
    l = 0.5 * (l - l.transpose()).eval();
    return kI * l.cast<cplx>();
  }
  Matrix a = decomp.vectors.adjoint() * dh * decomp.vectors;
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      a(j, k) *= j == k ? cplx(0.0) : filter_kernel_weight(filter, decomp.energies(j) - decomp.energies(k));
    }
  }
  return make_hermitian(decomp.vectors * a * decomp.vectors.adjoint());
}

Matrix qa_generator_spectral(const HamiltonianPath& path, double s, const Filter& filter,
                             const EigenDecomposition& decomp) {
  return qa_generator_spectral(path.dH_ds(s), filter, decomp);
}

QuadratureGenerator qa_generator_quadrature(const HamiltonianPath& path, double s,
                                            const Filter& filter, double t_cut, int n_nodes) {
  if (n_nodes < 64) throw std::invalid_argument("qa_generator_quadrature: n_nodes must be >= 64");
  if (!(t_cut > 0.0)) throw std::invalid_argument("qa_generator_quadrature: t_cut must be positive");
  if (n_nodes % 2 != 0) ++n_nodes;

  const Matrix h = path.H_of_s(s);
  const Matrix a = path.dH_ds(s);
  const Eigen::Index dim = h.rows();
  const double step = t_cut / n_nodes;
  const double half = 0.5 * step;

  QuadratureGenerator out;
  out.step = step;
  out.tail_estimate = a.cwiseAbs().rowwise().sum().maxCoeff() * filter.time_tail(t_cut);
  out.generator = Matrix::Zero(dim, dim);
  if (a.cwiseAbs().maxCoeff() == 0.0) return out;

  // e^{iuH} for u = j * half, re-anchored periodically to limit drift.
  const Matrix half_prop = (cplx(0.0, half) * h).exp();
  constexpr int kReanchor = 256;
  Matrix prop = Matrix::Identity(dim, dim);

  // chi is even, so L = int_0^inf chi(t) (I(t) + I(-t)) dt with
  // I(t) + I(-t) = int_0^t (tau_u(A) - tau_{-u}(A)) du.
  auto tau_pair = [&](const Matrix& u) {
    return Matrix(u * a * u.adjoint() - u.adjoint() * a * u);
  };

  Matrix inner = Matrix::Zero(dim, dim);  // I(t) + I(-t)
  Matrix prev = tau_pair(prop);           // at t_k
  // Outer Simpson weights: 1, 4, 2, 4, ..., 4, 1; the t=0 node has I = 0.
  for (int k = 0; k < n_nodes; ++k) {
    const int j_mid = 2 * k + 1;
    const int j_end = 2 * k + 2;
    prop = (j_mid % kReanchor == 0) ? Matrix((cplx(0.0, j_mid * half) * h).exp())
                                    : Matrix(half_prop * prop);
    const Matrix mid = tau_pair(prop);
    prop = (j_end % kReanchor == 0) ? Matrix((cplx(0.0, j_end * half) * h).exp())
                                    : Matrix(half_prop * prop);
    const Matrix end = tau_pair(prop);
    inner.noalias() += (step / 6.0) * (prev + 4.0 * mid + end);
    prev = end;
    const int node = k + 1;
    const double w = node == n_nodes ? 1.0 : (node % 2 == 1 ? 4.0 : 2.0);
    out.generator.noalias() += (w * filter.chi(node * step)) * inner;
  }
  out.generator *= step / 3.0;
  out.generator = make_hermitian(out.generator);
  return out;
}

Matrix evolve_path(const GeneratorProvider& provider, const Schedule& schedule, double s0,
                   double s1) {
  if (schedule.steps < 1) throw std::invalid_argument("evolve_path: steps must be >= 1");
  auto run = [&](int steps) {
    const double ds = (s1 - s0) / steps;
    // Accumulate in real arithmetic while every step is real orthogonal.
    RealMatrix ur;
    Matrix u;
    bool real = true;
    for (int k = 0; k < steps; ++k) {
      const Matrix g = provider(s0 + (k + 0.5) * ds);
      if (g.rows() != g.cols()) throw DimensionError("evolve_path: generator must be square");
      const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
      if (hermiticity_defect(g) > kGeneratorHermiticity * scale) {
        throw std::invalid_argument("evolve_path: generator at s=" +
                                    std::to_string(s0 + (k + 0.5) * ds) + " is not Hermitian");
      }
      const Matrix step = expi_hermitian(g, ds);
      if (real && step.imag().cwiseAbs().maxCoeff() == 0.0) {
        ur = k == 0 ? RealMatrix(step.real()) : RealMatrix(step.real() * ur);
        continue;
      }
      if (real) {
        u = k == 0 ? Matrix::Identity(step.rows(), step.cols()) : Matrix(ur.cast<cplx>());
        real = false;
      }
      u = step * u;
    }
    return real ? Matrix(ur.cast<cplx>()) : u;
  };
  if (schedule.order == StepOrder::midpoint) return run(schedule.steps);
  const Matrix coarse = run(schedule.steps);
  const Matrix fine = run(2 * schedule.steps);
  return polar_unitary((4.0 * fine - coarse) / 3.0);
}

ConvergedEvolution evolve_path_converged(const GeneratorProvider& provider, const Matrix& initial,
                                         StepOrder order, double tol, int start_steps,
                                         int max_steps) {
  if (start_steps < 1) throw std::invalid_argument("evolve_path_converged: start_steps must be >= 1");
  ConvergedEvolution out;
  int steps = start_steps;
  Matrix u = evolve_path(provider, {steps, order});
  Matrix psi = u * initial;
  out.last_change = std::numeric_limits<double>::infinity();
  while (2 * steps <= max_steps) {
    const Matrix u2 = evolve_path(provider, {2 * steps, order});
    const Matrix psi2 = u2 * initial;
    out.last_change = (psi2 - psi).colwise().norm().maxCoeff();
    steps *= 2;
    u = u2;
    psi = psi2;
    if (out.last_change < tol) {
      out.converged = true;
      break;
    }
  }
  out.unitary = std::move(u);
  out.steps = steps;
  return out;
}

QProjector q_projector(const EigenDecomposition& decomp, const Filter& filter) {
  QProjector out;
  const double omega = decomp.ground_energy;
  out.Q = spectral_function(decomp, [&](double e) { return cplx(filter.chi_hat(e - omega)); });
  for (Eigen::Index j = 1; j < decomp.dim(); ++j) {
    out.dist = std::max(out.dist, std::abs(filter.chi_hat(decomp.energies(j) - omega)));
  }
  return out;
}

ErrorCertificate error_certificate(const HamiltonianPath& path, const Filter& filter,
                                   const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("error_certificate: empty grid");
  ErrorCertificate c;
  c.gamma = filter.gamma();
  c.delta_gap = std::numeric_limits<double>::infinity();
  std::vector<double> product(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const EigenDecomposition d = eigendecompose(path.H_of_s(grid[i]));
    check_gap(d, "error_certificate");
    const Vector g = d.ground();
    Vector y = path.dH_ds(grid[i]) * g;
    y -= g * g.dot(y);
    const double eta = y.norm();
    double f = 0.0;
    for (Eigen::Index j = 1; j < d.dim(); ++j) {
      const double z = d.energies(j) - d.ground_energy;
      f = std::max(f, std::abs(filter.chi_hat(z)) / z);
    }
    c.eta_star = std::max(c.eta_star, eta);
    c.f_star = std::max(c.f_star, f);
    c.delta_gap = std::min(c.delta_gap, d.gap);
    product[i] = eta * f;
  }
  c.bound = c.eta_star * c.f_star;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    c.integrated_bound += 0.5 * (product[i] + product[i - 1]) * (grid[i] - grid[i - 1]);
  }
  c.chi_hat_at_gap = filter.chi_hat(c.delta_gap);
  c.quoted_chi_hat_at_gap = filter.quoted_gaussian_chi_hat(c.delta_gap);
  c.quoted_f_bound = c.quoted_chi_hat_at_gap / c.delta_gap;
  c.quoted_bound = c.eta_star * c.quoted_f_bound;
  return c;
}

TransportMeasurement measure_transport(const HamiltonianPath& path, const Filter& filter,
                                       double tol, int max_steps) {
  const EigenDecomposition d0 = eigendecompose(path.H_of_s(0.0));
  const EigenDecomposition d1 = eigendecompose(path.H_of_s(1.0));
  check_gap(d0, "measure_transport");
  check_gap(d1, "measure_transport");
  const Vector start = d0.ground();
  const Matrix start_col = start;

  const GeneratorProvider qa = [&](double s) {
    return qa_generator_spectral(path, s, filter, eigendecompose(path.H_of_s(s)));
  };
  const GeneratorProvider exact = [&](double s) {
    return exact_adiabatic_generator(path, s, eigendecompose(path.H_of_s(s)));
  };
  const ConvergedEvolution phi =
      evolve_path_converged(qa, start_col, StepOrder::richardson, tol, 16, max_steps);
  const ConvergedEvolution ref =
      evolve_path_converged(exact, start_col, StepOrder::richardson, tol, 16, max_steps);

  const Vector out = phi.unitary * start;
  const Vector transported = ref.unitary * start;
  const Vector omega1 = d1.ground();
  const cplx ov = omega1.dot(transported);
  const Vector omega_pt = omega1 * (ov / std::abs(ov));

  TransportMeasurement m;
  m.error = (out - omega_pt).norm();
  m.infidelity = std::max(0.0, 1.0 - std::abs(omega1.dot(out)));
  m.qa_steps = phi.steps;
  m.reference_steps = ref.steps;
  return m;
}

}  // namespace chainglue
