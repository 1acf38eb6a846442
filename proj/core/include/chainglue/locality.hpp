#pragma once

// Lieb-Robinson probes: exact commutator norms ||[tau_t(A), B]|| and a fit of
// |Y| e^{-v d} (e^{kappa_lr t} - 1) to the pre-saturation samples.

#include "chainglue/chain.hpp"
#include "chainglue/gluing.hpp"
#include "chainglue/oracle.hpp"

#include <stdexcept>
#include <vector>

namespace chainglue {

/// Samples with a norm at or above this are saturated and left out of fits.
inline constexpr double kSaturationNorm = 0.2;
/// Inflation applied to the fitted envelope before domination checks.
inline constexpr double kBoundInflation = 1.1;

struct LRSample {
  double t = 0.0;
  int distance = 0;
  double commutator_norm = 0.0;
  double bound_value = 0.0;  // NaN until a fit is applied
};

class LRFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Norm-1 probes on explicit supports. Throws std::invalid_argument when the
/// supports overlap.
double commutator_norm(const EigenDecomposition& decomp, int n, const Matrix& a,
                       const SupportInterval& a_support, const Matrix& b,
                       const SupportInterval& b_support, double t);

/// A = sigma^z at a_site, B = sigma^z at a_site + d for each d in d_grid
/// (d != 0). bound_value is NaN; see apply_lr_bound.
std::vector<LRSample> lr_commutator_scan(const ChainHamiltonian& h, int a_site,
                                         const std::vector<double>& t_grid,
                                         const std::vector<int>& d_grid);

/// Same scan on a precomputed decomposition of an n-site chain.
std::vector<LRSample> lr_commutator_scan(const EigenDecomposition& decomp, int n, int a_site,
                                         const std::vector<double>& t_grid,
                                         const std::vector<int>& d_grid);

struct LRFit {
  double v = 0.0;
  double kappa_lr = 0.0;
  double residual = 0.0;   // RMS of log residuals over the fitted samples
  double prefactor = 1.0;  // smallest C with C * bound >= every fitted sample
  int samples_used = 0;
  double support_size = 1.0;  // |Y|

  LRConstants constants() const { return {kappa_lr, v}; }
  /// |Y| e^{-v d} (e^{kappa_lr |t|} - 1)
  double bound(double t, int distance) const;
  /// kBoundInflation * prefactor * bound
  double inflated_bound(double t, int distance) const;
};

/// Least-squares fit of log norm = log|Y| - v d + log(e^{kappa t} - 1) over
/// samples with 0 < norm < kSaturationNorm and t > 0. Needs >= 10 such
/// samples, >= 3 distances and >= 2 times, else LRFitError.
LRFit fit_lr_constants(const std::vector<LRSample>& samples, double support_size = 1.0);

/// Sets bound_value to the inflated fitted bound for every sample.
void apply_lr_bound(std::vector<LRSample>& samples, const LRFit& fit);

}  // namespace chainglue
