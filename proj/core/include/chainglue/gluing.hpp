#pragma once

// Gluing two gapped blocks into the ground state of the joined chain with an
// ancilla-controlled sweep, and the doubling recursion built from it.
//
// Qubit order: the ancilla C' is the most significant factor, followed by
// chain site 0, 1, ..., n-1.

#include "chainglue/adiabatic.hpp"
#include "chainglue/chain.hpp"
#include "chainglue/filter.hpp"
#include "chainglue/oracle.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace chainglue {

/// Unshifted chain of the requested length from a translation-invariant
/// family. The int argument is the number of sites.
using FamilyBuilder = std::function<ChainHamiltonian(int)>;

FamilyBuilder tfim_family(double coupling, double field, int max_sites = kDefaultMaxSites);
FamilyBuilder heisenberg_family(double coupling, double field_z, double field_x,
                                int max_sites = kDefaultMaxSites);

struct SplitSystem {
  ChainHamiltonian H;  // ground energy shifted to 0
  int m = 0;           // A = sites [0, m-1], B = [m, n-1]
  ChainHamiltonian H_A;
  ChainHamiltonian H_B;
  Eigen::Matrix4cd h_I_local = Eigen::Matrix4cd::Zero();  // on sites (m-1, m)
  Matrix h_I;                                              // embedded in the chain
  double delta = 0.0;
  ChainHamiltonian K;  // terms: the block terms; dense = H - h_I - delta I
  Vector omega_H;
  Vector omega_K;  // omega_A (x) omega_B
  double gap_H = 0.0;
  double gap_K = 0.0;

  int n() const { return H.n; }
  /// |<Omega_K|Omega_H>|
  double overlap() const;
  /// min(gap_H, gap_K)
  double delta_e() const { return std::min(gap_H, gap_K); }
};

/// Split by family: H_A = family(m), H_B = family(n - m) and
/// h_I = H_raw - H_A (x) I - I (x) H_B, which must be supported on the seam
/// bond (m-1, m). Both blocks need at least 2 sites.
SplitSystem split(const FamilyBuilder& family, int n, int m);

/// Split by term list: h_I is the sum of the terms on bond (m-1, m) and the
/// blocks keep the remaining terms as they are.
SplitSystem split(const ChainHamiltonian& h, int m);

/// Which ancilla state hosts the coupled block H = K + H_I inside L.
enum class AncillaOrientation {
  as_written,  // (I + sigma^z)/2 (x) H_I: H in the |0> block
  flipped,     // (I - sigma^z)/2 (x) H_I: H in the |1> block
};

/// Orientation for which M(0) has ground state |0>|Omega_K> and M(pi/2) has
/// ground state |1>|Omega_H>, decided from the block spectra.
AncillaOrientation resolve_orientation(const SplitSystem& split, double kappa);

/// V(theta) = v v^dagger with v = (sin theta, -cos theta).
Eigen::Matrix2cd ancilla_v(double theta);
Eigen::Matrix2cd ancilla_v_prime(double theta);

struct AncillaPath {
  int n = 0;
  Matrix L;  // on n + 1 spins
  double kappa = 0.0;
  double delta_e = 0.0;
  double x_used = 0.0;
  AncillaOrientation orientation = AncillaOrientation::flipped;
  std::vector<double> theta_grid;

  Matrix M(double theta) const;
  Matrix dM_dtheta(double theta) const;
  /// Reparameterized by s = 2 theta / pi.
  HamiltonianPath as_path() const;
};

/// Builds L and M(theta) with kappa = Delta E / 4 and validates both
/// endpoints by diagonalizing M(0) and M(pi/2) (tolerance 1e-8). The
/// orientation is flipped if the as-written one fails; if neither passes a
/// std::runtime_error names the failing endpoint.
AncillaPath build_ancilla_path(const SplitSystem& split, double overlap_x, int grid_points = 33);

struct TwoLevel {
  Eigen::Matrix2cd matrix;  // in the {|0>|Omega_H>, |1>|Omega_K>} basis
  double gap = 0.0;         // eigenvalue difference of `matrix`
};

TwoLevel effective_two_level(cplx x, double theta);

/// gamma = constant / (|x| Delta E). 16 is the reference constant.
inline constexpr double kReferenceGammaConstant = 16.0;
double reference_gamma(double x, double delta_e, double constant = kReferenceGammaConstant);

struct GlueParams {
  std::optional<double> gamma;  // unset: reference_gamma of the stage
  std::optional<int> alpha;     // unset: full generator
  FilterKind filter = FilterKind::gaussian;
  int steps = 100;  // 0: double until converged
  StepOrder order = StepOrder::midpoint;
  double converge_tol = 1e-8;
  bool require_transfer = true;  // throw StageFailure when the |1> weight is below 0.5
  int max_sites = kDefaultMaxSites;
};

class StageFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GluingStage {
  int level = 1;
  int block_size = 0;
  std::optional<int> alpha;  // unset: full generator
  double gamma = 0.0;
  Matrix unitary;  // on `support`, after ancilla disposal
  SupportInterval support;
  std::optional<double> fidelity_vs_exact;

  double transfer_weight = 0.0;  // weight of ancilla |1> before disposal
  int dominant_ancilla = 1;
  double projected_fidelity = 0.0;  // projected branch vs Omega_H
  double sweep_fidelity = 0.0;      // |<1, Omega_H| U |0, Omega_K>|
  double x_used = 0.0;
  double delta_e = 0.0;
  double kappa = 0.0;
  int steps = 0;
};

struct GlueOutcome {
  GluingStage stage;
  Vector output_state;  // unitary applied to Omega_K on the split chain
};

/// Chain sites of the truncation window for radius alpha around seam m:
/// [m - alpha, m + alpha - 1] clipped to the chain.
SupportInterval truncation_window(int m, int alpha, int n);

/// One sweep theta: 0 -> pi/2. Throws StageFailure (transfer weight) and
/// GapCollapseError.
GlueOutcome glue_once(const SplitSystem& split, const GlueParams& params);

struct TruncationRow {
  double s = 0.0;
  int alpha = 0;
  double distance = 0.0;  // ||k(s) - k_alpha(s)||
};

struct TruncationUnitaryRow {
  int alpha = 0;
  double unitary_distance = 0.0;  // ||V - V_alpha|| on chain + ancilla
  double integral_bound = 0.0;    // midpoint sum of ||k - k_alpha|| ds
};

struct TruncationReport {
  std::vector<TruncationRow> rows;  // s-major, alpha ascending
  std::vector<TruncationUnitaryRow> unitary_rows;
  double gamma = 0.0;
};

/// Operator-norm distances between the full and truncated generators on the
/// grid, plus the unitary comparison over `unitary_steps` midpoint steps when
/// that is positive.
TruncationReport truncation_distance(const SplitSystem& split, const std::vector<double>& s_grid,
                                     double gamma, const std::vector<int>& alphas,
                                     FilterKind filter = FilterKind::gaussian,
                                     int unitary_steps = 0);

struct LocalCircuit {
  Vector base_block_state;
  int m = 0;
  int copies = 0;
  std::vector<GluingStage> stages;

  int n() const { return m * copies; }
};

struct LRConstants {
  double kappa_lr = 1.0;
  double v = 1.0;
};

struct EpsilonBudget {
  double epsilon_one = 0.0;
  double total = 0.0;
  double gamma_required = 0.0;  // smallest bracketed gamma with total <= target
};

/// epsilon(gamma) = exp(-2 gamma^2 x^2 dE^2) / (x dE) + gamma dE exp(-kappa_lr gamma / v),
/// total = (n/m) epsilon.
EpsilonBudget epsilon_budget(double gamma, double x, double delta_e, int n, int m,
                             const LRConstants& lr, double target = 1e-3);

struct LevelReport {
  int level = 0;
  int block_size = 0;
  int seams = 0;
  double gamma = 0.0;
  double x_used = 0.0;
  double delta_e = 0.0;
  double epsilon = 0.0;     // epsilon(gamma) for this level
  double cumulative = 0.0;  // 2 * previous + epsilon
  std::optional<double> fidelity;  // approximant on 2 * block_size sites vs oracle
};

struct IterationReport {
  LocalCircuit circuit;
  std::vector<LevelReport> levels;
  double epsilon_one = 0.0;  // worst x and gap over levels
  double total_error = 0.0;  // (n/m) epsilon_one
  std::optional<double> final_fidelity;
};

class GluingAborted : public std::runtime_error {
 public:
  GluingAborted(const std::string& what, IterationReport partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const IterationReport& partial() const { return partial_; }

 private:
  IterationReport partial_;
};

/// Requires n = m 2^k with k >= 1. Stage unitaries are computed once per
/// level on a 2b-site chain and repeated at every seam of that level.
IterationReport iterate_gluing(const FamilyBuilder& family, int m, int n, const GlueParams& params,
                               const LRConstants& lr = {});

}  // namespace chainglue
