#pragma once

// Cutoff functions chi_gamma and their transforms.
//
// Transform convention: chi_hat(w) = integral chi(t) e^{i w t} dt. Both kinds
// are even and real, so chi_hat is even and real.

#include "chainglue/linalg.hpp"

#include <memory>
#include <string>

namespace chainglue {

enum class FilterKind { gaussian, compact_bump };

std::string to_string(FilterKind kind);
/// Accepts "gaussian" or "compact_bump"; throws std::invalid_argument otherwise.
FilterKind filter_kind_from_string(const std::string& name);

class Filter {
 public:
  /// gaussian:     chi(t) = exp(-t^2 / 2 gamma^2) / (sqrt(2 pi) gamma); chi_hat
  ///               comes from a cached Fourier quadrature of chi.
  /// compact_bump: chi_hat(w) = e * exp(-1 / (1 - (w/gamma)^2)) on |w| < gamma,
  ///               0 elsewhere; chi(t) comes from quadrature of chi_hat.
  static Filter make(FilterKind kind, double gamma);

  FilterKind kind() const { return kind_; }
  double gamma() const { return gamma_; }

  double chi(double t) const;
  double chi_hat(double omega) const;

  /// q(w) = (1 - chi_hat(w)) / w, evaluated without cancellation near 0.
  /// Odd in w, q(0) = 0.
  double kernel_q(double omega) const;

  /// integral t^2 chi(t) dt = -chi_hat''(0).
  double second_moment() const;

  /// Upper estimate of integral_{|t| > t_cut} |t| |chi(t)| dt.
  double time_tail(double t_cut) const;

  /// exp(-2 gamma^2 w^2), the closed form printed alongside the Gaussian
  /// filter in the source derivation. Recorded for comparison only; NaN for
  /// the bump.
  double quoted_gaussian_chi_hat(double omega) const;

 private:
  Filter(FilterKind kind, double gamma) : kind_(kind), gamma_(gamma) {}
  FilterKind kind_;
  double gamma_;
};

/// w(omega) = integral chi(t) integral_0^t e^{i u omega} du dt
///          = (chi_hat(omega) - 1) / (i omega),  w(0) = 0.
cplx filter_kernel_weight(const Filter& f, double omega);

}  // namespace chainglue
