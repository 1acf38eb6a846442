#include "chainglue/filter.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace chainglue {

namespace {

using boost::math::quadrature::gauss;

constexpr int kGaussPoints = 30;

// Unit-width Gaussian density; the gamma-dependence is a pure rescaling.
double unit_gauss(double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); }

template <class F>
double panel_integral(F f, double a, double b, int panels) {
  double total = 0.0;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    total += gauss<double, kGaussPoints>::integrate(f, a + p * w, a + (p + 1) * w);
  }
  return total;
}

// sin(s)/s - (1 - cos s)/s^2, the t^2-stripped kernel of d q / d omega.
double dq_kernel(double s) {
  if (std::abs(s) < 1e-3) return 0.5 - s * s / 8.0;
  return std::sin(s) / s - (1.0 - std::cos(s)) / (s * s);
}

// 2 sin^2(s/2) / s, the t-stripped kernel of q.
double q_kernel(double s) {
  if (std::abs(s) < 1e-4) return s / 2.0;
  const double h = std::sin(0.5 * s);
  return 2.0 * h * h / s;
}

// Tables for the unit Gaussian on u in [0, kUMax]: chi_hat and q with their
// derivatives, for cubic Hermite interpolation.
class GaussTable {
 public:
  static constexpr double kUMax = 12.0;
  static constexpr double kStep = 0.004;
  static constexpr double kTMax = 9.0;  // tail mass beyond is ~1e-19
  static constexpr int kPanels = 18;

  GaussTable() {
    const int count = static_cast<int>(std::lround(kUMax / kStep)) + 1;
    ch_.resize(count);
    dch_.resize(count);
    q_.resize(count);
    dq_.resize(count);
    for (int i = 0; i < count; ++i) {
      const double u = i * kStep;
      ch_[i] = 2.0 * panel_integral([u](double t) { return unit_gauss(t) * std::cos(u * t); }, 0.0,
                                    kTMax, kPanels);
      dch_[i] = -2.0 * panel_integral(
                           [u](double t) { return t * unit_gauss(t) * std::sin(u * t); }, 0.0,
                           kTMax, kPanels);
      q_[i] = 2.0 * panel_integral([u](double t) { return t * unit_gauss(t) * q_kernel(u * t); },
                                   0.0, kTMax, kPanels);
      dq_[i] = 2.0 * panel_integral(
                         [u](double t) { return t * t * unit_gauss(t) * dq_kernel(u * t); }, 0.0,
                         kTMax, kPanels);
    }
  }

  static const GaussTable& instance() {
    static const GaussTable table;
    return table;
  }

  double chi_hat(double u) const {
    u = std::abs(u);
    if (u >= kUMax) return 0.0;
    return hermite(ch_, dch_, u);
  }

  double q(double u) const {
    const double a = std::abs(u);
    const double v = a >= kUMax ? 1.0 / a : hermite(q_, dq_, a);
    return u < 0 ? -v : v;
  }

 private:
  static double hermite(const std::vector<double>& f, const std::vector<double>& df, double u) {
    const auto last = static_cast<int>(f.size()) - 2;
    const int i = std::min(static_cast<int>(u / kStep), last);
    const double x = (u - i * kStep) / kStep;
    const double x2 = x * x;
    const double x3 = x2 * x;
    const double h00 = 2 * x3 - 3 * x2 + 1;
    const double h10 = x3 - 2 * x2 + x;
    const double h01 = -2 * x3 + 3 * x2;
    const double h11 = x3 - x2;
    return h00 * f[i] + h10 * kStep * df[i] + h01 * f[i + 1] + h11 * kStep * df[i + 1];
  }

  std::vector<double> ch_, dch_, q_, dq_;
};

// Standard bump on (-1, 1), normalized to 1 at 0.
double unit_bump(double u) {
  const double a = u * u;
  if (a >= 1.0) return 0.0;
  return std::exp(-a / (1.0 - a));
}

// chi(t) for the unit-width bump: (1/pi) integral_0^1 bump(u) cos(u t) du.
double unit_bump_chi(double t) {
  const int panels = std::max(8, static_cast<int>(std::ceil(std::abs(t) / 2.0)));
  return panel_integral([t](double u) { return unit_bump(u) * std::cos(u * t); }, 0.0, 1.0,
                        panels) /
         std::numbers::pi;
}

}  // namespace

std::string to_string(FilterKind kind) {
  return kind == FilterKind::gaussian ? "gaussian" : "compact_bump";
}

FilterKind filter_kind_from_string(const std::string& name) {
  if (name == "gaussian") return FilterKind::gaussian;
  if (name == "compact_bump") return FilterKind::compact_bump;
  throw std::invalid_argument("unknown filter kind '" + name +
                              "' (expected gaussian or compact_bump)");
}

Filter Filter::make(FilterKind kind, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("Filter::make: gamma must be positive and finite");
  }
  if (kind == FilterKind::gaussian) (void)GaussTable::instance();
  return Filter(kind, gamma);
}

double Filter::chi(double t) const {
  if (kind_ == FilterKind::gaussian) return unit_gauss(t / gamma_) / gamma_;
  return gamma_ * unit_bump_chi(gamma_ * t);
}

double Filter::chi_hat(double omega) const {
  if (kind_ == FilterKind::gaussian) return GaussTable::instance().chi_hat(omega * gamma_);
  return unit_bump(omega / gamma_);
}

double Filter::kernel_q(double omega) const {
  if (omega == 0.0) return 0.0;
  if (kind_ == FilterKind::gaussian) return gamma_ * GaussTable::instance().q(omega * gamma_);
  const double u = omega / gamma_;
  const double a = u * u;
  if (a >= 1.0) return 1.0 / omega;
  return -std::expm1(-a / (1.0 - a)) / omega;
}

double Filter::second_moment() const {
  return kind_ == FilterKind::gaussian ? gamma_ * gamma_ : 2.0 / (gamma_ * gamma_);
}

double Filter::time_tail(double t_cut) const {
  t_cut = std::abs(t_cut);
  if (kind_ == FilterKind::gaussian) {
    const double z = t_cut / gamma_;
    return 2.0 * gamma_ * std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  }
  // The bump decays like exp(-c sqrt(gamma t)). Integrate one side over a long
  // window, double for the other side, and double again to cover the rest.
  const double span = std::max(8.0 * t_cut, t_cut + 200.0 / gamma_);
  const double one_side =
      panel_integral([this](double t) { return std::abs(t * chi(t)); }, t_cut, span, 64);
  return 4.0 * one_side;
}

double Filter::quoted_gaussian_chi_hat(double omega) const {
  if (kind_ != FilterKind::gaussian) return std::numeric_limits<double>::quiet_NaN();
  return std::exp(-2.0 * gamma_ * gamma_ * omega * omega);
}

cplx filter_kernel_weight(const Filter& f, double omega) {
  // (chi_hat - 1)/(i w) = i (1 - chi_hat)/w = i q(w)
  return cplx(0.0, f.kernel_q(omega));
}

}  // namespace chainglue
