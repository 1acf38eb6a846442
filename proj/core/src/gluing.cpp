#include "chainglue/gluing.hpp"

#include "chainglue/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace chainglue {

namespace {

constexpr double kEndpointTolerance = 1e-8;
constexpr double kLocalityTolerance = 1e-9;

Matrix identity(Eigen::Index d) { return Matrix::Identity(d, d); }

Matrix kron_with_identity(const Eigen::Matrix2cd& a, Eigen::Index d) {
  Matrix out = Matrix::Zero(2 * d, 2 * d);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (a(i, j) != cplx(0.0)) out.block(i * d, j * d, d, d).diagonal().setConstant(a(i, j));
    }
  }
  return out;
}

// block0 on ancilla |0>, block1 on ancilla |1>.
Matrix block_diag(const Matrix& block0, const Matrix& block1) {
  const Eigen::Index d = block0.rows();
  Matrix out = Matrix::Zero(2 * d, 2 * d);
  out.topLeftCorner(d, d) = block0;
  out.bottomRightCorner(d, d) = block1;
  return out;
}

// Sweep model on (ancilla, window): M(s) = base + kappa V(pi s / 2) (x) I.
struct SweepModel {
  Matrix base;
  double kappa = 0.0;
  Eigen::Index chain_dim = 0;

  Matrix M(double s) const {
    return base + kappa * kron_with_identity(ancilla_v(0.5 * std::numbers::pi * s), chain_dim);
  }
  Matrix dM(double s) const {
    return (0.5 * std::numbers::pi * kappa) *
           kron_with_identity(ancilla_v_prime(0.5 * std::numbers::pi * s), chain_dim);
  }
  Matrix generator(double s, const Filter& filter) const {
    return qa_generator_spectral(dM(s), filter, eigendecompose(M(s)));
  }
};

SweepModel make_model(const Matrix& k_block, const Matrix& h_block, AncillaOrientation o,
                      double kappa) {
  SweepModel model;
  model.kappa = kappa;
  model.chain_dim = k_block.rows();
  model.base = o == AncillaOrientation::flipped ? block_diag(k_block, h_block)
                                                : block_diag(h_block, k_block);
  return model;
}

SweepModel full_model(const SplitSystem& sp, AncillaOrientation o, double kappa) {
  return make_model(sp.K.dense, sp.H.dense, o, kappa);
}

// Block terms fully inside [lo, hi] plus the seam term and delta.
SweepModel window_model(const SplitSystem& sp, const SupportInterval& w, AncillaOrientation o,
                        double kappa) {
  const int width = w.width();
  const Eigen::Index d = dim_of(width);
  Matrix blocks = Matrix::Zero(d, d);
  for (const auto& t : sp.K.terms) {
    if (t.site_index >= w.lo && t.site_index + 1 <= w.hi) {
      blocks += embed_operator(t.matrix, {t.site_index - w.lo, t.site_index + 1 - w.lo}, width);
    }
  }
  const Matrix seam =
      embed_operator(sp.h_I_local, {sp.m - 1 - w.lo, sp.m - w.lo}, width) + sp.delta * identity(d);
  return make_model(blocks, blocks + seam, o, kappa);
}

Eigen::Matrix4cd extract_seam_term(const Matrix& h_i, int m, int n) {
  const double scale = static_cast<double>(dim_of(n - 2));
  const Matrix local = partial_trace(h_i, {m - 1, m}, n) / scale;
  const Matrix back = embed_operator(local, {m - 1, m}, n);
  const double defect = (back - h_i).cwiseAbs().maxCoeff();
  if (defect > kLocalityTolerance * std::max(1.0, h_i.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("split: boundary term is not supported on the seam bond (defect " +
                                std::to_string(defect) + ")");
  }
  return local;
}

ChainHamiltonian shifted_block_terms(const ChainHamiltonian& b, int offset, int n) {
  ChainHamiltonian out;
  out.n = n;
  for (auto t : b.terms) {
    t.site_index += offset;
    out.terms.push_back(std::move(t));
  }
  return out;
}

void finish_split(SplitSystem& sp, int n, int max_sites) {
  const GroundAndGap ga = ground_and_gap(sp.H_A);
  const GroundAndGap gb = ground_and_gap(sp.H_B);
  require_gap(ga, "split: block A");
  require_gap(gb, "split: block B");

  const EigenDecomposition dh = eigendecompose(sp.H.dense);
  require_gap(ground_and_gap(dh), "split: joined chain");
  sp.omega_H = dh.ground();
  sp.gap_H = dh.gap;
  sp.omega_K = kron(ga.ground, gb.ground);
  sp.gap_K = std::min(ga.gap, gb.gap);

  // K = H_A + H_B - (E_A + E_B); delta = (E_A + E_B) - E_H.
  const double e_blocks = ga.ground_energy + gb.ground_energy + sp.H_A.energy_shift +
                          sp.H_B.energy_shift;
  sp.delta = e_blocks - sp.H.energy_shift;
  sp.K.n = n;
  sp.K.dense = kron(sp.H_A.raw(), identity(dim_of(n - sp.m))) +
               kron(identity(dim_of(sp.m)), sp.H_B.raw());
  sp.K.dense.diagonal().array() -= e_blocks;
  sp.K.energy_shift = e_blocks;
  (void)max_sites;
}

void check_split_sizes(int n, int m) {
  if (m < 2 || n - m < 2) {
    throw std::invalid_argument("split: blocks need at least 2 sites each (got " +
                                std::to_string(m) + " + " + std::to_string(n - m) +
                                "); a single site carries no bond terms");
  }
}

}  // namespace

FamilyBuilder tfim_family(double coupling, double field, int max_sites) {
  return [=](int n) { return tfim_chain(n, coupling, field, false, max_sites); };
}

FamilyBuilder heisenberg_family(double coupling, double field_z, double field_x, int max_sites) {
  return [=](int n) { return heisenberg_chain(n, coupling, field_z, field_x, false, max_sites); };
}

double SplitSystem::overlap() const { return std::abs(omega_K.dot(omega_H)); }

SplitSystem split(const FamilyBuilder& family, int n, int m) {
  check_split_sizes(n, m);
  SplitSystem sp;
  sp.m = m;
  const ChainHamiltonian raw = family(n);
  if (raw.n != n) throw std::invalid_argument("split: family returned a chain of the wrong length");
  sp.H_A = family(m);
  sp.H_B = family(n - m);

  sp.h_I = raw.dense - kron(sp.H_A.dense, identity(dim_of(n - m))) -
           kron(identity(dim_of(m)), sp.H_B.dense);
  sp.h_I_local = extract_seam_term(sp.h_I, m, n);
  sp.h_I = embed_operator(sp.h_I_local, {m - 1, m}, n);

  sp.H = raw;
  const EigenDecomposition d = eigendecompose(raw.dense);
  sp.H.energy_shift = d.ground_energy;
  sp.H.dense.diagonal().array() -= d.ground_energy;

  ChainHamiltonian a_terms = shifted_block_terms(sp.H_A, 0, n);
  ChainHamiltonian b_terms = shifted_block_terms(sp.H_B, m, n);
  sp.K.terms = std::move(a_terms.terms);
  sp.K.terms.insert(sp.K.terms.end(), b_terms.terms.begin(), b_terms.terms.end());
  finish_split(sp, n, kDefaultMaxSites);
  return sp;
}

SplitSystem split(const ChainHamiltonian& h, int m) {
  const int n = h.n;
  check_split_sizes(n, m);
  SplitSystem sp;
  sp.m = m;
  std::vector<LocalTerm> a;
  std::vector<LocalTerm> b;
  for (const auto& t : h.terms) {
    if (t.site_index == m - 1) {
      sp.h_I_local += t.matrix;
    } else if (t.site_index < m - 1) {
      a.push_back(t);
    } else {
      LocalTerm s = t;
      s.site_index -= m;
      b.push_back(s);
    }
  }
  sp.H_A = assemble_chain(a, m, false, n);
  sp.H_B = assemble_chain(b, n - m, false, n);
  sp.h_I = embed_operator(sp.h_I_local, {m - 1, m}, n);

  sp.H = h;
  const EigenDecomposition d = eigendecompose(h.raw());
  sp.H.dense = h.raw();
  sp.H.energy_shift = d.ground_energy;
  sp.H.dense.diagonal().array() -= d.ground_energy;

  sp.K.terms = a;
  for (auto t : b) {
    t.site_index += m;
    sp.K.terms.push_back(std::move(t));
  }
  finish_split(sp, n, n);
  return sp;
}

Eigen::Matrix2cd ancilla_v(double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  Eigen::Matrix2cd v;
  v << s * s, -s * c, -s * c, c * c;
  return v;
}

Eigen::Matrix2cd ancilla_v_prime(double theta) {
  const double s2 = std::sin(2.0 * theta);
  const double c2 = std::cos(2.0 * theta);
  Eigen::Matrix2cd v;
  v << s2, -c2, -c2, -s2;
  return v;
}

AncillaOrientation resolve_orientation(const SplitSystem& sp, double kappa) {
  if (!(kappa > kEndpointTolerance)) {
    throw std::invalid_argument("resolve_orientation: kappa must be positive");
  }
  (void)sp;
  // H is shifted to ground energy 0 and delta puts K's ground energy at 0.
  const double e_h = 0.0;
  const double e_k = 0.0;
  for (AncillaOrientation o : {AncillaOrientation::as_written, AncillaOrientation::flipped}) {
    const bool k_on_zero = o == AncillaOrientation::flipped;
    const double e0 = k_on_zero ? e_k : e_h;
    const double e1 = k_on_zero ? e_h : e_k;
    // theta = 0: V = |1><1| lifts block 1 by kappa. Need |0> (x) Omega_K.
    const int start = e0 < e1 + kappa ? 0 : 1;
    const bool start_ok = start == 0 && k_on_zero;
    // theta = pi/2: V = |0><0| lifts block 0. Need |1> (x) Omega_H.
    const int end = e1 < e0 + kappa ? 1 : 0;
    const bool end_ok = end == 1 && k_on_zero;
    if (start_ok && end_ok) return o;
  }
  throw std::runtime_error("resolve_orientation: no ancilla orientation matches the endpoints");
}

Matrix AncillaPath::M(double theta) const {
  return L + kappa * kron_with_identity(ancilla_v(theta), dim_of(n));
}

Matrix AncillaPath::dM_dtheta(double theta) const {
  return kappa * kron_with_identity(ancilla_v_prime(theta), dim_of(n));
}

HamiltonianPath AncillaPath::as_path() const {
  HamiltonianPath p;
  const AncillaPath self = *this;
  p.H_of_s = [self](double s) { return self.M(0.5 * std::numbers::pi * s); };
  p.dH_ds = [self](double s) {
    return Matrix(0.5 * std::numbers::pi * self.dM_dtheta(0.5 * std::numbers::pi * s));
  };
  p.gap_floor = 0.0;
  return p;
}

namespace {

// Empty string when both endpoints host the expected product ground states.
std::string endpoint_mismatch(const AncillaPath& path, const SplitSystem& sp) {
  const Eigen::Index d = dim_of(path.n);
  auto check = [&](double theta, int ancilla, const Vector& chain, const char* name) -> std::string {
    const EigenDecomposition e = eigendecompose(path.M(theta));
    if (e.gap < kGapTolerance) return std::string(name) + " ground space is degenerate";
    const Vector g = e.ground();
    const double weight = g.segment(ancilla * d, d).squaredNorm();
    const double fid = std::abs(chain.dot(g.segment(ancilla * d, d)));
    if (weight < 1.0 - kEndpointTolerance || fid < 1.0 - kEndpointTolerance) {
      return std::string(name) + " ground state is not |" + std::to_string(ancilla) +
             "> (x) expected (ancilla weight " + std::to_string(weight) + ", fidelity " +
             std::to_string(fid) + ")";
    }
    return {};
  };
  std::string msg = check(0.0, 0, sp.omega_K, "theta=0");
  if (!msg.empty()) return msg;
  return check(0.5 * std::numbers::pi, 1, sp.omega_H, "theta=pi/2");
}

}  // namespace

AncillaPath build_ancilla_path(const SplitSystem& sp, double overlap_x, int grid_points) {
  if (!(overlap_x >= 0.0 && overlap_x <= 1.0 + 1e-12)) {
    throw std::invalid_argument("build_ancilla_path: |x| must lie in [0, 1]");
  }
  if (grid_points < 2) throw std::invalid_argument("build_ancilla_path: need >= 2 grid points");
  AncillaPath path;
  path.n = sp.n();
  path.delta_e = sp.delta_e();
  path.kappa = path.delta_e / 4.0;
  path.x_used = overlap_x;
  for (int i = 0; i < grid_points; ++i) {
    path.theta_grid.push_back(0.5 * std::numbers::pi * i / (grid_points - 1));
  }

  std::string first_failure;
  for (AncillaOrientation o : {AncillaOrientation::as_written, AncillaOrientation::flipped}) {
    path.orientation = o;
    path.L = full_model(sp, o, 0.0).base;
    const std::string msg = endpoint_mismatch(path, sp);
    if (msg.empty()) return path;
    if (first_failure.empty()) first_failure = msg;
    else {
      throw std::runtime_error("build_ancilla_path: endpoint validation failed in both "
                               "orientations; as written: " +
                               first_failure + "; flipped: " + msg);
    }
  }
  throw std::logic_error("unreachable");
}

TwoLevel effective_two_level(cplx x, double theta) {
  if (std::abs(x) > 1.0 + 1e-12) throw std::invalid_argument("effective_two_level: |x| > 1");
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  TwoLevel t;
  t.matrix << s * s, -s * c * std::conj(x), -s * c * x, c * c;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(t.matrix, Eigen::EigenvaluesOnly);
  t.gap = es.eigenvalues()(1) - es.eigenvalues()(0);
  return t;
}

double reference_gamma(double x, double delta_e, double constant) {
  if (!(x > 0.0) || !(delta_e > 0.0)) {
    throw std::invalid_argument("reference_gamma: x and delta_e must be positive");
  }
  return constant / (x * delta_e);
}

SupportInterval truncation_window(int m, int alpha, int n) {
  if (alpha < 1) throw std::invalid_argument("truncation_window: alpha must be >= 1");
  return {std::max(0, m - alpha), std::min(n - 1, m + alpha - 1)};
}

GlueOutcome glue_once(const SplitSystem& sp, const GlueParams& params) {
  const int n = sp.n();
  const double x = sp.overlap();
  const double delta_e = sp.delta_e();
  const double kappa = delta_e / 4.0;
  const double gamma = params.gamma ? *params.gamma : reference_gamma(x, delta_e);
  const Filter filter = Filter::make(params.filter, gamma);
  const AncillaOrientation orientation = resolve_orientation(sp, kappa);

  SupportInterval window{0, n - 1};
  SweepModel model;
  if (params.alpha) {
    window = truncation_window(sp.m, *params.alpha, n);
    model = window_model(sp, window, orientation, kappa);
  } else {
    model = full_model(sp, orientation, kappa);
  }
  const Eigen::Index wd = model.chain_dim;
  const GeneratorProvider provider = [&](double s) { return model.generator(s, filter); };

  GluingStage st;
  st.alpha = params.alpha;
  st.gamma = gamma;
  st.block_size = sp.m;
  st.support = window;
  st.x_used = x;
  st.delta_e = delta_e;
  st.kappa = kappa;

  Matrix u;
  if (params.steps > 0) {
    u = evolve_path(provider, {params.steps, params.order});
    st.steps = params.steps;
  } else {
    const Matrix start = Matrix::Identity(2 * wd, wd);
    const ConvergedEvolution ce =
        evolve_path_converged(provider, start, params.order, params.converge_tol, 16, 2048);
    u = ce.unitary;
    st.steps = ce.steps;
  }

  const Matrix u10 = u.block(wd, 0, wd, wd);
  const Vector branch1 = apply_local(sp.omega_K, u10, window.lo, n);
  st.transfer_weight = branch1.squaredNorm();
  st.sweep_fidelity = std::abs(sp.omega_H.dot(branch1));
  st.dominant_ancilla = st.transfer_weight >= 0.5 ? 1 : 0;
  if (params.require_transfer && st.transfer_weight < 0.5) {
    throw StageFailure("glue_once: sweep failed, ancilla |1> weight " +
                       std::to_string(st.transfer_weight) + " < 0.5 (gamma " +
                       std::to_string(gamma) + ")");
  }
  const Matrix u_dom = u.block(st.dominant_ancilla * wd, 0, wd, wd);
  const Vector branch =
      st.dominant_ancilla == 1 ? branch1 : apply_local(sp.omega_K, u_dom, window.lo, n);
  st.projected_fidelity = std::abs(sp.omega_H.dot(branch)) / branch.norm();

  st.unitary = polar_unitary(u_dom);
  GlueOutcome out;
  out.output_state = apply_local(sp.omega_K, st.unitary, window.lo, n);
  st.fidelity_vs_exact = std::abs(sp.omega_H.dot(out.output_state));
  out.stage = std::move(st);
  return out;
}

TruncationReport truncation_distance(const SplitSystem& sp, const std::vector<double>& s_grid,
                                     double gamma, const std::vector<int>& alphas,
                                     FilterKind filter_kind, int unitary_steps) {
  if (alphas.empty()) throw std::invalid_argument("truncation_distance: empty alpha list");
  if (!std::is_sorted(alphas.begin(), alphas.end()) || alphas.front() < 1) {
    throw std::invalid_argument("truncation_distance: alphas must be ascending and >= 1");
  }
  const int n = sp.n();
  const double kappa = sp.delta_e() / 4.0;
  const Filter filter = Filter::make(filter_kind, gamma);
  const AncillaOrientation o = resolve_orientation(sp, kappa);
  const SweepModel full = full_model(sp, o, kappa);

  std::vector<SupportInterval> windows;
  std::vector<SweepModel> models;
  for (int a : alphas) {
    windows.push_back(truncation_window(sp.m, a, n));
    models.push_back(window_model(sp, windows.back(), o, kappa));
  }
  auto truncated = [&](std::size_t i, double s) {
    return embed_with_ancilla(models[i].generator(s, filter), windows[i].lo, n);
  };

  TruncationReport rep;
  rep.gamma = gamma;
  for (double s : s_grid) {
    const Matrix k = full.generator(s, filter);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      rep.rows.push_back({s, alphas[i], hermitian_norm(k - truncated(i, s))});
    }
  }

  if (unitary_steps > 0) {
    const double ds = 1.0 / unitary_steps;
    const Eigen::Index dim = full.base.rows();
    Matrix v = identity(dim);
    std::vector<Matrix> va(alphas.size(), identity(dim));
    std::vector<double> integral(alphas.size(), 0.0);
    for (int step = 0; step < unitary_steps; ++step) {
      const double s = (step + 0.5) * ds;
      const Matrix k = full.generator(s, filter);
      v = expi_hermitian(k, ds) * v;
      for (std::size_t i = 0; i < alphas.size(); ++i) {
        const Matrix ka = truncated(i, s);
        integral[i] += hermitian_norm(k - ka) * ds;
        va[i] = expi_hermitian(ka, ds) * va[i];
      }
    }
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      rep.unitary_rows.push_back({alphas[i], operator_norm(v - va[i]), integral[i]});
    }
  }
  return rep;
}

EpsilonBudget epsilon_budget(double gamma, double x, double delta_e, int n, int m,
                             const LRConstants& lr, double target) {
  if (!(gamma > 0.0) || !(x > 0.0) || x > 1.0 + 1e-12 || !(delta_e > 0.0) || n <= 0 || m <= 0 ||
      !(lr.kappa_lr > 0.0) || !(lr.v > 0.0) || !(target > 0.0)) {
    throw std::invalid_argument("epsilon_budget: arguments must be positive with |x| <= 1");
  }
  const double ratio = static_cast<double>(n) / m;
  auto eps = [&](double g) {
    const double a = x * delta_e;
    return std::exp(-2.0 * g * g * a * a) / a + g * delta_e * std::exp(-lr.kappa_lr * g / lr.v);
  };
  auto total = [&](double g) { return ratio * eps(g); };

  EpsilonBudget b;
  b.epsilon_one = eps(gamma);
  b.total = total(gamma);

  double hi = std::max(gamma, 1.0 / (x * delta_e));
  int guard = 0;
  while (total(hi) > target) {
    hi *= 2.0;
    if (++guard > 200) {
      b.gamma_required = std::numeric_limits<double>::infinity();
      return b;
    }
  }
  double lo = hi;
  guard = 0;
  while (total(lo) <= target) {
    lo *= 0.5;
    if (++guard > 200) {
      b.gamma_required = lo;
      return b;
    }
  }
  for (;;) {
    while (hi / lo > 1.0001) {
      const double mid = std::sqrt(lo * hi);
      (total(mid) <= target ? hi : lo) = mid;
    }
    // A non-monotone total could still dip below target just under hi.
    if (total(hi / 1.01) > target) break;
    hi /= 1.01;
    lo = hi;
    while (total(lo) <= target) lo *= 0.5;
  }
  b.gamma_required = hi;
  return b;
}

IterationReport iterate_gluing(const FamilyBuilder& family, int m, int n, const GlueParams& params,
                               const LRConstants& lr) {
  if (m < 2 || n <= m || n % m != 0) {
    throw std::invalid_argument("iterate_gluing: n must be m * 2^k with k >= 1 and m >= 2");
  }
  int copies = n / m;
  int levels = 0;
  while ((1 << levels) < copies) ++levels;
  if ((1 << levels) != copies) {
    throw std::invalid_argument("iterate_gluing: n / m = " + std::to_string(copies) +
                                " is not a power of two");
  }

  IterationReport rep;
  const ChainHamiltonian base = family(m);
  const GroundAndGap bg = ground_and_gap(base);
  require_gap(bg, "iterate_gluing: base block");
  rep.circuit.base_block_state = bg.ground;
  rep.circuit.m = m;
  rep.circuit.copies = copies;

  double worst_x = 1.0;
  double worst_gap = std::numeric_limits<double>::infinity();
  double cumulative = 0.0;
  double gamma_for_total = 0.0;
  for (int k = 1; k <= levels; ++k) {
    const int b = m << (k - 1);
    const int pair = 2 * b;
    GlueOutcome outcome;
    SplitSystem sp;
    try {
      if (pair > params.max_sites) {
        throw ResourceLimitError("iterate_gluing: level " + std::to_string(k) + " needs " +
                                 std::to_string(pair) + " sites, cap is " +
                                 std::to_string(params.max_sites));
      }
      sp = split(family, pair, b);
      outcome = glue_once(sp, params);
    } catch (const std::exception& e) {
      throw GluingAborted("iterate_gluing: level " + std::to_string(k) + " failed: " + e.what(),
                          rep);
    }
    GluingStage proto = outcome.stage;
    proto.level = k;
    proto.block_size = b;
    const int seams = copies >> k;
    for (int j = 0; j < seams; ++j) {
      GluingStage s = proto;
      s.support.lo += pair * j;
      s.support.hi += pair * j;
      if (j > 0) s.fidelity_vs_exact.reset();
      rep.circuit.stages.push_back(std::move(s));
    }

    LevelReport lv;
    lv.level = k;
    lv.block_size = b;
    lv.seams = seams;
    lv.gamma = proto.gamma;
    lv.x_used = proto.x_used;
    lv.delta_e = proto.delta_e;
    lv.epsilon = epsilon_budget(proto.gamma, proto.x_used, proto.delta_e, n, m, lr).epsilon_one;
    cumulative = 2.0 * cumulative + lv.epsilon;
    lv.cumulative = cumulative;

    // Approximant on the first 2b sites from every stage applied so far.
    LocalCircuit sub;
    sub.base_block_state = rep.circuit.base_block_state;
    sub.m = m;
    sub.copies = pair / m;
    for (const auto& s : rep.circuit.stages) {
      if (s.support.hi < pair) sub.stages.push_back(s);
    }
    const Vector approx = apply_circuit_dense(sub, params.max_sites);
    lv.fidelity = std::abs(sp.omega_H.dot(approx));
    rep.levels.push_back(lv);

    worst_x = std::min(worst_x, proto.x_used);
    worst_gap = std::min(worst_gap, proto.delta_e);
    gamma_for_total = gamma_for_total == 0.0 ? proto.gamma : std::min(gamma_for_total, proto.gamma);
  }

  const EpsilonBudget eb = epsilon_budget(gamma_for_total, worst_x, worst_gap, n, m, lr);
  rep.epsilon_one = eb.epsilon_one;
  rep.total_error = eb.total;
  if (n <= params.max_sites) {
    rep.final_fidelity = rep.levels.back().fidelity;
  }
  return rep;
}

}  // namespace chainglue
