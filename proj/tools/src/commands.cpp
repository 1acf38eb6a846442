#include "commands.hpp"

#include "csv.hpp"
#include "pool.hpp"

#include "chainglue/adiabatic.hpp"
#include "chainglue/gluing.hpp"
#include "chainglue/locality.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>

namespace chainglue::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CellMeta {
  double runtime_ms = 0.0;
  std::string status = "ok";
  std::string message;
};

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string alpha_label(const std::optional<int>& a) { return a ? std::to_string(*a) : "full"; }

std::ofstream open_output(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::filesystem::path write_metadata(const std::string& name, const ExperimentConfig& config,
                                     const RunOptions& options, const std::vector<CellMeta>& cells,
                                     double total_ms) {
  json meta;
  meta["command"] = name;
  meta["experiment"] = config.experiment;
  meta["config_hash"] = config_hash(config);
  meta["config"] = config.canonical;
  meta["seed"] = config.seed;
  meta["jobs"] = options.jobs;
  meta["max_sites"] = options.max_sites;
  meta["csv_schema_version"] = kCsvSchemaVersion;
  meta["finished_utc"] = utc_now();
  meta["total_runtime_ms"] = total_ms;
  json arr = json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    json c;
    c["cell"] = i;
    c["runtime_ms"] = cells[i].runtime_ms;
    c["status"] = cells[i].status;
    if (!cells[i].message.empty()) c["message"] = cells[i].message;
    arr.push_back(std::move(c));
  }
  meta["cells"] = std::move(arr);
  const auto path = options.out_dir / (name + "_metadata.json");
  auto out = open_output(path);
  out << meta.dump(2) << '\n';
  return path;
}

void finish(CommandResult& result, const std::vector<CellMeta>& cells, const std::string& what) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].status != "ok") {
      result.failures.push_back(what + " cell " + std::to_string(i) + ": " + cells[i].status +
                                ": " + cells[i].message);
      result.exit_code = kExitFailure;
    }
  }
}

void require_grid(bool empty, const std::string& field, const std::string& command) {
  if (empty) throw ConfigError(field, "required by '" + command + "' and must not be empty");
}

void require_cap(int n, const RunOptions& options) {
  if (n > options.max_sites) {
    throw ResourceLimitError("n = " + std::to_string(n) + " exceeds the site cap of " +
                             std::to_string(options.max_sites));
  }
}

// Gap problems and stage failures are run failures; anything else escapes.
template <class Fn>
void guarded(CellMeta& meta, Fn&& fn) {
  const auto start = Clock::now();
  try {
    fn();
  } catch (const GapCollapseError& e) {
    meta.status = "gap_failure";
    meta.message = e.what();
  } catch (const StageFailure& e) {
    meta.status = "stage_failure";
    meta.message = e.what();
  } catch (const std::exception& e) {
    meta.status = "error";
    meta.message = e.what();
  }
  meta.runtime_ms = elapsed_ms(start);
}

}  // namespace

// ---------------------------------------------------------------- glue

CommandResult cmd_glue(const ExperimentConfig& config, const RunOptions& options) {
  require_grid(config.gamma_grid.empty(), "gamma_grid", "glue");
  int k = 0;
  for (int b = config.m; b < config.n; b *= 2) ++k;
  if (config.m < 2 || config.n != config.m * (1 << k) || k < 1) {
    throw ConfigError("n", "must equal m * 2^k with k >= 1 and m >= 2 (got m = " +
                               std::to_string(config.m) + ", n = " + std::to_string(config.n) + ")");
  }
  require_cap(config.n, options);

  struct Cell {
    double gamma;
    std::optional<int> alpha;
  };
  std::vector<Cell> grid;
  for (double g : config.gamma_grid) {
    for (const auto& a : config.alpha_grid) grid.push_back({g, a});
  }

  struct Out {
    std::optional<IterationReport> report;
    double min_sweep = kNaN;
    double min_weight = kNaN;
    int max_steps = 0;
  };
  std::vector<Out> outs(grid.size());
  std::vector<CellMeta> metas(grid.size());
  const FamilyBuilder family = model_family(config.model, options.max_sites);
  const auto start = Clock::now();

  run_cells(static_cast<int>(grid.size()), options.jobs, [&](int i) {
    guarded(metas[i], [&] {
      GlueParams p;
      p.gamma = grid[i].gamma;
      p.alpha = grid[i].alpha;
      p.filter = config.filter;
      p.steps = config.steps.policy == "fixed" ? config.steps.count : 0;
      p.order = config.steps.order;
      p.converge_tol = config.steps.tol;
      p.require_transfer = config.require_transfer;
      p.max_sites = options.max_sites;
      try {
        outs[i].report = iterate_gluing(family, config.m, config.n, p, config.lr_constants);
      } catch (const GluingAborted& e) {
        outs[i].report = e.partial();
        throw StageFailure(e.what());
      }
    });
    if (outs[i].report) {
      double sweep = std::numeric_limits<double>::infinity();
      double weight = sweep;
      for (const auto& s : outs[i].report->circuit.stages) {
        sweep = std::min(sweep, s.sweep_fidelity);
        weight = std::min(weight, s.transfer_weight);
        outs[i].max_steps = std::max(outs[i].max_steps, s.steps);
      }
      if (std::isfinite(sweep)) {
        outs[i].min_sweep = sweep;
        outs[i].min_weight = weight;
      }
    }
  });
  const double total_ms = elapsed_ms(start);

  CommandResult result;
  const auto csv_path = options.out_dir / "glue.csv";
  {
    auto out = open_output(csv_path);
    CsvWriter w(out, {"config_hash", "experiment", "cell", "gamma", "alpha", "filter", "levels",
                      "fidelity", "infidelity", "sweep_infidelity", "epsilon_one",
                      "epsilon_total", "gap", "x_used", "transfer_weight", "steps", "status"});
    const std::string hash = config_hash(config);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto& r = outs[i].report;
      std::optional<double> fid;
      double gap = kNaN;
      double x = kNaN;
      int levels = 0;
      double eps_one = kNaN;
      double eps_total = kNaN;
      if (r) {
        fid = r->final_fidelity;
        levels = static_cast<int>(r->levels.size());
        for (const auto& l : r->levels) {
          gap = std::isnan(gap) ? l.delta_e : std::min(gap, l.delta_e);
          x = std::isnan(x) ? l.x_used : std::min(x, l.x_used);
        }
        if (metas[i].status == "ok") {
          eps_one = r->epsilon_one;
          eps_total = r->total_error;
        }
      }
      w.row({hash, config.experiment, std::to_string(i), csv_number(grid[i].gamma),
             alpha_label(grid[i].alpha), to_string(config.filter), std::to_string(levels),
             csv_number(fid), fid ? csv_number(std::max(0.0, 1.0 - *fid)) : "",
             csv_number(std::isnan(outs[i].min_sweep) ? kNaN : 1.0 - outs[i].min_sweep),
             csv_number(eps_one), csv_number(eps_total), csv_number(gap), csv_number(x),
             csv_number(outs[i].min_weight), std::to_string(outs[i].max_steps),
             metas[i].status});
    }
  }
  result.files.push_back(csv_path);
  result.files.push_back(write_metadata("glue", config, options, metas, total_ms));
  finish(result, metas, "glue");
  return result;
}

// ---------------------------------------------------------------- certify

CommandResult cmd_certify(const ExperimentConfig& config, const RunOptions& options) {
  require_grid(config.gamma_grid.empty(), "gamma_grid", "certify");
  require_cap(config.n, options);
  const auto& cc = config.certify;
  const Matrix h0 = model_family(config.model, options.max_sites, cc.field_from)(config.n).dense;
  const Matrix h1 = model_family(config.model, options.max_sites, cc.field_to)(config.n).dense;
  const HamiltonianPath path = linear_path(h0, h1);
  std::vector<double> grid;
  for (int i = 0; i < cc.grid_points; ++i) grid.push_back(static_cast<double>(i) / (cc.grid_points - 1));

  const std::size_t cells = config.gamma_grid.size();
  std::vector<std::optional<ErrorCertificate>> certs(cells);
  std::vector<std::optional<TransportMeasurement>> meas(cells);
  std::vector<CellMeta> metas(cells);
  const auto start = Clock::now();
  run_cells(static_cast<int>(cells), options.jobs, [&](int i) {
    guarded(metas[i], [&] {
      const Filter f = Filter::make(config.filter, config.gamma_grid[i]);
      certs[i] = error_certificate(path, f, grid);
      meas[i] = measure_transport(path, f);
    });
  });
  const double total_ms = elapsed_ms(start);

  CommandResult result;
  const auto csv_path = options.out_dir / "certify.csv";
  {
    auto out = open_output(csv_path);
    CsvWriter w(out, {"config_hash", "experiment", "cell", "gamma", "filter", "eta_star", "f_star",
                      "error_bound", "integrated_bound", "measured_error", "infidelity", "gap",
                      "quoted_bound", "chi_hat_at_gap", "quoted_chi_hat_at_gap", "qa_steps",
                      "certified", "status"});
    const std::string hash = config_hash(config);
    for (std::size_t i = 0; i < cells; ++i) {
      const auto& c = certs[i];
      const auto& m = meas[i];
      auto num = [](const auto& opt, auto field) { return opt ? csv_number(field(*opt)) : ""; };
      std::string certified;
      if (c && m) certified = m->error <= c->bound + 1e-6 ? "1" : "0";
      w.row({hash, config.experiment, std::to_string(i), csv_number(config.gamma_grid[i]),
             to_string(config.filter),
             num(c, [](const ErrorCertificate& x) { return x.eta_star; }),
             num(c, [](const ErrorCertificate& x) { return x.f_star; }),
             num(c, [](const ErrorCertificate& x) { return x.bound; }),
             num(c, [](const ErrorCertificate& x) { return x.integrated_bound; }),
             num(m, [](const TransportMeasurement& x) { return x.error; }),
             num(m, [](const TransportMeasurement& x) { return x.infidelity; }),
             num(c, [](const ErrorCertificate& x) { return x.delta_gap; }),
             num(c, [](const ErrorCertificate& x) { return x.quoted_bound; }),
             num(c, [](const ErrorCertificate& x) { return x.chi_hat_at_gap; }),
             num(c, [](const ErrorCertificate& x) { return x.quoted_chi_hat_at_gap; }),
             m ? std::to_string(m->qa_steps) : "", certified, metas[i].status});
    }
  }
  result.files.push_back(csv_path);
  result.files.push_back(write_metadata("certify", config, options, metas, total_ms));
  finish(result, metas, "certify");
  return result;
}

// ---------------------------------------------------------------- truncation

CommandResult cmd_truncation(const ExperimentConfig& config, const RunOptions& options) {
  require_grid(config.gamma_grid.empty(), "gamma_grid", "truncation");
  require_cap(config.n, options);
  if (config.m < 2 || config.n - config.m < 2) {
    throw ConfigError("m", "seam must leave at least 2 sites on each side");
  }
  const int full_width = std::max(config.m, config.n - config.m);
  std::vector<int> alphas;
  for (const auto& a : config.alpha_grid) alphas.push_back(a ? std::min(*a, full_width) : full_width);
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

  const FamilyBuilder family = model_family(config.model, options.max_sites);
  const std::size_t cells = config.gamma_grid.size();
  std::vector<std::optional<TruncationReport>> reports(cells);
  std::vector<CellMeta> metas(cells);
  const auto start = Clock::now();
  std::optional<SplitSystem> sp;
  CellMeta split_meta;
  guarded(split_meta, [&] { sp = split(family, config.n, config.m); });
  if (sp) {
    run_cells(static_cast<int>(cells), options.jobs, [&](int i) {
      guarded(metas[i], [&] {
        reports[i] = truncation_distance(*sp, config.truncation.s_grid, config.gamma_grid[i], alphas,
                                         config.filter, config.truncation.unitary_steps);
      });
    });
  } else {
    for (auto& m : metas) m = split_meta;
  }
  const double total_ms = elapsed_ms(start);

  CommandResult result;
  const std::string hash = config_hash(config);
  const auto csv_path = options.out_dir / "truncation.csv";
  {
    auto out = open_output(csv_path);
    CsvWriter w(out, {"config_hash", "experiment", "cell", "gamma", "s", "alpha", "full_width",
                      "distance"});
    for (std::size_t i = 0; i < cells; ++i) {
      if (!reports[i]) continue;
      for (const auto& r : reports[i]->rows) {
        w.row({hash, config.experiment, std::to_string(i), csv_number(config.gamma_grid[i]),
               csv_number(r.s), std::to_string(r.alpha), r.alpha >= full_width ? "1" : "0",
               csv_number(r.distance)});
      }
    }
  }
  result.files.push_back(csv_path);
  if (config.truncation.unitary_steps > 0) {
    const auto upath = options.out_dir / "truncation_unitary.csv";
    auto out = open_output(upath);
    CsvWriter w(out, {"config_hash", "experiment", "cell", "gamma", "alpha", "unitary_distance",
                      "integral_bound"});
    for (std::size_t i = 0; i < cells; ++i) {
      if (!reports[i]) continue;
      for (const auto& r : reports[i]->unitary_rows) {
        w.row({hash, config.experiment, std::to_string(i), csv_number(config.gamma_grid[i]),
               std::to_string(r.alpha), csv_number(r.unitary_distance),
               csv_number(r.integral_bound)});
      }
    }
    result.files.push_back(upath);
  }
  result.files.push_back(write_metadata("truncation", config, options, metas, total_ms));
  finish(result, metas, "truncation");
  return result;
}

// ---------------------------------------------------------------- lr

CommandResult cmd_lr(const ExperimentConfig& config, const RunOptions& options) {
  require_grid(config.lr.t_grid.empty(), "lr.t_grid", "lr");
  require_grid(config.lr.d_grid.empty(), "lr.d_grid", "lr");
  require_cap(config.n, options);
  const int a = config.lr.a_site;
  if (a < 0 || a >= config.n) throw ConfigError("lr.a_site", "outside the chain");
  for (int d : config.lr.d_grid) {
    if (d == 0 || a + d < 0 || a + d >= config.n) {
      throw ConfigError("lr.d_grid", "distance " + std::to_string(d) +
                                         " puts B on A or outside the chain");
    }
  }
  const ChainHamiltonian h = model_family(config.model, options.max_sites)(config.n);
  const EigenDecomposition decomp = eigendecompose(h);

  const std::size_t cells = config.lr.t_grid.size();
  std::vector<std::vector<LRSample>> per_t(cells);
  std::vector<CellMeta> metas(cells);
  const auto start = Clock::now();
  run_cells(static_cast<int>(cells), options.jobs, [&](int i) {
    guarded(metas[i], [&] {
      per_t[i] = lr_commutator_scan(decomp, config.n, a, {config.lr.t_grid[i]}, config.lr.d_grid);
    });
  });
  std::vector<LRSample> samples;
  for (const auto& v : per_t) samples.insert(samples.end(), v.begin(), v.end());

  CommandResult result;
  const std::string hash = config_hash(config);
  std::optional<LRFit> fit;
  std::string fit_error;
  try {
    fit = fit_lr_constants(samples);
    apply_lr_bound(samples, *fit);
  } catch (const LRFitError& e) {
    fit_error = e.what();
  }
  const double total_ms = elapsed_ms(start);

  const auto csv_path = options.out_dir / "lr.csv";
  {
    auto out = open_output(csv_path);
    CsvWriter w(out, {"config_hash", "t", "distance", "commutator_norm", "bound_value"});
    for (const auto& s : samples) {
      w.row({hash, csv_number(s.t), std::to_string(s.distance), csv_number(s.commutator_norm),
             csv_number(s.bound_value)});
    }
  }
  result.files.push_back(csv_path);

  json constants;
  constants["config_hash"] = hash;
  if (fit) {
    constants["v"] = fit->v;
    constants["kappa_lr"] = fit->kappa_lr;
    constants["residual"] = fit->residual;
    constants["prefactor"] = fit->prefactor;
    constants["inflation"] = kBoundInflation;
    constants["samples_used"] = fit->samples_used;
    constants["saturation_norm"] = kSaturationNorm;
  } else {
    constants["error"] = fit_error;
  }
  const auto cpath = options.out_dir / "lr_constants.json";
  {
    auto out = open_output(cpath);
    out << constants.dump(2) << '\n';
  }
  result.files.push_back(cpath);
  result.files.push_back(write_metadata("lr", config, options, metas, total_ms));
  finish(result, metas, "lr");
  if (!fit) {
    result.failures.push_back("lr fit: " + fit_error);
    result.exit_code = kExitFailure;
  }
  return result;
}

}  // namespace chainglue::cli
