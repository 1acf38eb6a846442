#include "chainglue/locality.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>
#include <set>

namespace chainglue {

double commutator_norm(const EigenDecomposition& decomp, int n, const Matrix& a,
                       const SupportInterval& a_support, const Matrix& b,
                       const SupportInterval& b_support, double t) {
  if (a_support.intersects(b_support)) {
    throw std::invalid_argument("commutator_norm: A and B supports overlap");
  }
  Matrix an = a / operator_norm(a);
  Matrix bn = b / operator_norm(b);
  const Matrix ae = heisenberg_evolve(decomp, embed_operator(an, a_support, n), t);
  const Matrix be = embed_operator(bn, b_support, n);
  // [A, B] is anti-Hermitian for Hermitian A, B; i[A, B] is Hermitian.
  const Matrix c = cplx(0.0, 1.0) * (ae * be - be * ae);
  return hermitian_norm(0.5 * (c + c.adjoint()));
}

std::vector<LRSample> lr_commutator_scan(const ChainHamiltonian& h, int a_site,
                                         const std::vector<double>& t_grid,
                                         const std::vector<int>& d_grid) {
  return lr_commutator_scan(eigendecompose(h), h.n, a_site, t_grid, d_grid);
}

std::vector<LRSample> lr_commutator_scan(const EigenDecomposition& decomp, int n, int a_site,
                                         const std::vector<double>& t_grid,
                                         const std::vector<int>& d_grid) {
  if (decomp.dim() != dim_of(n)) throw DimensionError("lr_commutator_scan: decomposition does not match n");
  if (a_site < 0 || a_site >= n) throw std::invalid_argument("lr_commutator_scan: A site outside chain");
  for (int d : d_grid) {
    if (d == 0) throw std::invalid_argument("lr_commutator_scan: A and B supports overlap (d = 0)");
    if (a_site + d < 0 || a_site + d >= n) {
      throw std::invalid_argument("lr_commutator_scan: B site " + std::to_string(a_site + d) +
                                  " outside chain");
    }
  }
  const Matrix z = pauli::z();
  std::vector<LRSample> out;
  for (double t : t_grid) {
    for (int d : d_grid) {
      LRSample s;
      s.t = t;
      s.distance = std::abs(d);
      s.commutator_norm =
          commutator_norm(decomp, n, z, {a_site, a_site}, z, {a_site + d, a_site + d}, t);
      s.bound_value = std::numeric_limits<double>::quiet_NaN();
      out.push_back(s);
    }
  }
  return out;
}

double LRFit::bound(double t, int distance) const {
  return support_size * std::exp(-v * distance) * std::expm1(kappa_lr * std::abs(t));
}

double LRFit::inflated_bound(double t, int distance) const {
  return kBoundInflation * prefactor * bound(t, distance);
}

LRFit fit_lr_constants(const std::vector<LRSample>& samples, double support_size) {
  if (!(support_size > 0.0)) throw std::invalid_argument("fit_lr_constants: |Y| must be positive");
  bool any_positive = false;
  std::vector<const LRSample*> used;
  for (const auto& s : samples) {
    if (s.commutator_norm > 0.0) any_positive = true;
    if (s.t > 0.0 && s.commutator_norm > 0.0 && s.commutator_norm < kSaturationNorm) {
      used.push_back(&s);
    }
  }
  if (!any_positive) {
    throw LRFitError("fit_lr_constants: every commutator norm is zero, so the log fit is undefined");
  }
  std::set<int> distances;
  std::set<double> times;
  for (const auto* s : used) {
    distances.insert(s->distance);
    times.insert(s->t);
  }
  if (used.size() < 10 || distances.size() < 3 || times.size() < 2) {
    throw LRFitError("fit_lr_constants: degenerate design (" + std::to_string(used.size()) +
                     " pre-saturation samples, " + std::to_string(distances.size()) +
                     " distances, " + std::to_string(times.size()) +
                     " times; need >= 10, >= 3, >= 2)");
  }

  const double log_y = std::log(support_size);
  // For fixed kappa the optimal v is closed form: residual r_i = z_i + v d_i.
  auto solve_v = [&](double kappa, double& sse) {
    double dz = 0.0;
    double dd = 0.0;
    for (const auto* s : used) {
      const double z = std::log(s->commutator_norm) - log_y - std::log(std::expm1(kappa * s->t));
      dz += s->distance * z;
      dd += double(s->distance) * s->distance;
    }
    const double v = -dz / dd;
    sse = 0.0;
    for (const auto* s : used) {
      const double z = std::log(s->commutator_norm) - log_y - std::log(std::expm1(kappa * s->t));
      const double r = z + v * s->distance;
      sse += r * r;
    }
    return v;
  };
  auto objective = [&](double log_kappa) {
    double sse = 0.0;
    solve_v(std::exp(log_kappa), sse);
    return sse;
  };

  // Coarse scan in log kappa, then Brent inside the best bracket.
  const double lo = std::log(1e-4);
  const double hi = std::log(1e2);
  constexpr int kScan = 121;
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double x = lo + (hi - lo) * i / (kScan - 1);
    const double f = objective(x);
    if (f < best_val) {
      best_val = f;
      best = i;
    }
  }
  const double a = lo + (hi - lo) * std::max(0, best - 1) / (kScan - 1);
  const double b = lo + (hi - lo) * std::min(kScan - 1, best + 1) / (kScan - 1);
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::brent_find_minima(objective, a, b,
                                                       std::numeric_limits<double>::digits, iters);

  LRFit fit;
  fit.support_size = support_size;
  fit.kappa_lr = std::exp(r.first);
  double sse = 0.0;
  fit.v = solve_v(fit.kappa_lr, sse);
  fit.residual = std::sqrt(sse / static_cast<double>(used.size()));
  fit.samples_used = static_cast<int>(used.size());
  fit.prefactor = 0.0;
  for (const auto* s : used) {
    fit.prefactor = std::max(fit.prefactor, s->commutator_norm / fit.bound(s->t, s->distance));
  }
  fit.prefactor = std::max(fit.prefactor, 1.0);
  return fit;
}

void apply_lr_bound(std::vector<LRSample>& samples, const LRFit& fit) {
  for (auto& s : samples) s.bound_value = fit.inflated_bound(s.t, s.distance);
}

}  // namespace chainglue
