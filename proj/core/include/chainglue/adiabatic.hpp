#pragma once

// Adiabatic and quasi-adiabatic transport of ground states along a gapped
// path H(s), s in [0, 1].

#include "chainglue/filter.hpp"
#include "chainglue/linalg.hpp"
#include "chainglue/oracle.hpp"

#include <functional>
#include <vector>

namespace chainglue {

struct HamiltonianPath {
  std::function<Matrix(double)> H_of_s;
  std::function<Matrix(double)> dH_ds;
  double gap_floor = 0.0;  // optional a-priori lower bound on the gap, 0 if unknown
};

/// H(s) = (1 - s) h0 + s h1.
HamiltonianPath linear_path(const Matrix& h0, const Matrix& h1);

/// H(s) = h0 for every s.
HamiltonianPath constant_path(const Matrix& h0);

/// max over `grid` of |dH_ds(s) - (H(s+step) - H(s-step)) / 2 step|, clipped
/// to [0, 1] with one-sided differences at the ends.
double path_derivative_defect(const HamiltonianPath& path, const std::vector<double>& grid,
                              double step = 1e-4);

/// Hermitian G with iG|Omega> = R dH|Omega>, R the Moore-Penrose resolvent:
/// G = i[P, P'] with P' = R dH P + P dH R.
Matrix exact_adiabatic_generator(const HamiltonianPath& path, double s,
                                 const EigenDecomposition& decomp);

/// Eigenbasis form L_jk = w(E_j - E_k) (dH)_jk, zero diagonal, Hermitian.
Matrix qa_generator_spectral(const HamiltonianPath& path, double s, const Filter& filter,
                             const EigenDecomposition& decomp);

/// Same generator for an explicit derivative operator.
Matrix qa_generator_spectral(const Matrix& dh, const Filter& filter,
                             const EigenDecomposition& decomp);

struct QuadratureGenerator {
  Matrix generator;
  double step = 0.0;           // outer Simpson step t_cut / n_nodes
  double tail_estimate = 0.0;  // ||dH|| * integral_{|t|>t_cut} |t chi(t)| dt
};

/// Direct time-domain evaluation of
///   L = integral chi(t) integral_0^t e^{iuH} dH e^{-iuH} du dt
/// on |t| <= t_cut. Propagators come from a Pade matrix exponential (no
/// eigendecomposition); the inner integral is accumulated per interval with
/// Simpson's rule on half steps, the outer one is composite Simpson.
/// n_nodes is rounded up to an even number and must be >= 64.
QuadratureGenerator qa_generator_quadrature(const HamiltonianPath& path, double s,
                                            const Filter& filter, double t_cut, int n_nodes);

enum class StepOrder { midpoint, richardson };

struct Schedule {
  int steps = 64;
  StepOrder order = StepOrder::midpoint;
};

/// Supplies the Hermitian generator at s; the flow is dU/ds = i G(s) U.
using GeneratorProvider = std::function<Matrix(double)>;

/// Time-ordered product of exp(i G(s_mid) ds) over [s0, s1]. Richardson
/// combines N and 2N steps as (4 U_2N - U_N)/3 followed by the polar factor.
/// Throws std::invalid_argument on a non-Hermitian generator.
Matrix evolve_path(const GeneratorProvider& provider, const Schedule& schedule, double s0 = 0.0,
                   double s1 = 1.0);

struct ConvergedEvolution {
  Matrix unitary;
  int steps = 0;
  double last_change = 0.0;  // largest column change of the final doubling
  bool converged = false;
};

/// Doubles the step count from `start_steps` until every column of
/// U * initial moves by less than `tol` in norm, or `max_steps` is reached.
ConvergedEvolution evolve_path_converged(const GeneratorProvider& provider, const Matrix& initial,
                                         StepOrder order = StepOrder::midpoint,
                                         double tol = 1e-9, int start_steps = 16,
                                         int max_steps = 4096);

struct QProjector {
  Matrix Q;
  double dist = 0.0;  // max_{j>=1} |chi_hat(E_j - Omega)|
};

/// Q = sum_j chi_hat(E_j - Omega) |E_j><E_j|.
QProjector q_projector(const EigenDecomposition& decomp, const Filter& filter);

struct ErrorCertificate {
  double eta_star = 0.0;
  double f_star = 0.0;
  double bound = 0.0;  // eta_star * f_star
  double gamma = 0.0;
  double delta_gap = 0.0;         // minimum gap on the grid
  double integrated_bound = 0.0;  // trapezoid estimate of integral eta f ds
  // Closed-form Gaussian comparison, f <= exp(-2 gamma^2 Delta^2)/Delta with
  // the quoted transform; NaN for the bump.
  double quoted_f_bound = 0.0;
  double quoted_bound = 0.0;
  double chi_hat_at_gap = 0.0;         // measured transform at Delta
  double quoted_chi_hat_at_gap = 0.0;  // quoted closed form at Delta
};

/// eta(s) = ||(1 - P) dH |Omega>||, f(s) = max_{j>=1} |chi_hat(E_j-Omega)/(E_j-Omega)|,
/// suprema over `grid`. Throws GapCollapseError if the gap closes on the grid.
ErrorCertificate error_certificate(const HamiltonianPath& path, const Filter& filter,
                                   const std::vector<double>& grid);

struct TransportMeasurement {
  double error = 0.0;       // || Phi(1) - Omega_pt(1) ||
  double infidelity = 0.0;  // 1 - |<Omega(1)|Phi(1)>|
  int qa_steps = 0;
  int reference_steps = 0;
};

/// Transports the ground state of H(0) with the quasi-adiabatic flow and
/// compares it with the parallel-transported ground state of H(1). The
/// reference phase comes from a converged exact-adiabatic evolution.
TransportMeasurement measure_transport(const HamiltonianPath& path, const Filter& filter,
                                       double tol = 1e-10, int max_steps = 4096);

}  // namespace chainglue
