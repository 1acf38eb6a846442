#include "config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace chainglue::cli {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) throw ConfigError(join(path, key), "unknown key");
  }
}

double read_number(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  return v.get<double>();
}

int read_int(const json& obj, const std::string& path, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v.get<int>();
}

std::string read_string(const json& obj, const std::string& path, const char* key,
                        const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

template <class T>
std::vector<T> read_list(const json& obj, const std::string& path, const char* key,
                         std::vector<T> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  const std::string field = join(path, key);
  if (!v.is_array()) throw ConfigError(field, "expected an array");
  if (v.empty()) throw ConfigError(field, "grid must not be empty");
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& e = v[i];
    const std::string where = field + "[" + std::to_string(i) + "]";
    if constexpr (std::is_same_v<T, int>) {
      if (!e.is_number_integer()) throw ConfigError(where, "expected an integer");
    } else {
      if (!e.is_number()) throw ConfigError(where, "expected a number");
    }
    out.push_back(e.get<T>());
  }
  return out;
}

// Line and column (1-based) of a byte offset.
std::pair<int, int> locate(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void parse_model(const json& j, ModelConfig& m) {
  const std::string p = "model";
  check_keys(j, p, {"kind", "coupling", "field", "field_z", "field_x"});
  m.kind = read_string(j, p, "kind", m.kind);
  if (m.kind != "tfim" && m.kind != "heisenberg") {
    throw ConfigError("model.kind", "unknown model kind '" + m.kind + "' (tfim, heisenberg)");
  }
  m.coupling = read_number(j, p, "coupling", m.coupling);
  m.field = read_number(j, p, "field", m.field);
  m.field_z = read_number(j, p, "field_z", m.field_z);
  m.field_x = read_number(j, p, "field_x", m.field_x);
}

void parse_steps(const json& j, StepsConfig& s) {
  const std::string p = "steps";
  check_keys(j, p, {"policy", "count", "order", "tol"});
  s.policy = read_string(j, p, "policy", s.policy);
  if (s.policy != "fixed" && s.policy != "converged") {
    throw ConfigError("steps.policy", "expected 'fixed' or 'converged'");
  }
  s.count = read_int(j, p, "count", s.count);
  if (s.count < 1) throw ConfigError("steps.count", "must be >= 1");
  const std::string order = read_string(j, p, "order", "midpoint");
  if (order == "midpoint") s.order = StepOrder::midpoint;
  else if (order == "richardson") s.order = StepOrder::richardson;
  else throw ConfigError("steps.order", "expected 'midpoint' or 'richardson'");
  s.tol = read_number(j, p, "tol", s.tol);
  if (!(s.tol > 0.0)) throw ConfigError("steps.tol", "must be positive");
}

}  // namespace

ConfigError::ConfigError(const std::string& field, const std::string& message, int line,
                         int column)
    : std::runtime_error(line > 0 ? "config:" + std::to_string(line) + ":" +
                                        std::to_string(column) + ": " + message
                                  : "config field '" + field + "': " + message),
      field_(field),
      line_(line),
      column_(column) {}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = locate(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError("<syntax>", e.what(), line, col);
  }

  ExperimentConfig c;
  check_keys(doc, "",
             {"experiment", "model", "m", "n", "gamma_grid", "alpha_grid", "filter", "steps",
              "require_transfer", "seed", "output_dir", "lr_constants", "target", "certify",
              "truncation", "lr"});
  c.experiment = read_string(doc, "", "experiment", c.experiment);
  if (doc.contains("model")) parse_model(doc.at("model"), c.model);
  c.m = read_int(doc, "", "m", c.m);
  c.n = read_int(doc, "", "n", c.n);
  if (c.m < 1) throw ConfigError("m", "must be >= 1");
  if (c.n < 2) throw ConfigError("n", "must be >= 2");
  c.gamma_grid = read_list<double>(doc, "", "gamma_grid", {});
  for (std::size_t i = 0; i < c.gamma_grid.size(); ++i) {
    if (!(c.gamma_grid[i] > 0.0)) {
      throw ConfigError("gamma_grid[" + std::to_string(i) + "]", "must be positive");
    }
  }
  if (doc.contains("alpha_grid")) {
    const json& a = doc.at("alpha_grid");
    if (!a.is_array()) throw ConfigError("alpha_grid", "expected an array");
    if (a.empty()) throw ConfigError("alpha_grid", "grid must not be empty");
    c.alpha_grid.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string where = "alpha_grid[" + std::to_string(i) + "]";
      if (a[i].is_null()) {
        c.alpha_grid.emplace_back(std::nullopt);
      } else if (a[i].is_number_integer() && a[i].get<int>() >= 1) {
        c.alpha_grid.emplace_back(a[i].get<int>());
      } else {
        throw ConfigError(where, "expected an integer >= 1 or null (full generator)");
      }
    }
  }
  if (doc.contains("filter")) {
    try {
      c.filter = filter_kind_from_string(read_string(doc, "", "filter", ""));
    } catch (const std::invalid_argument&) {
      throw ConfigError("filter", "expected 'gaussian' or 'compact_bump'");
    }
  }
  if (doc.contains("steps")) parse_steps(doc.at("steps"), c.steps);
  if (doc.contains("require_transfer")) {
    if (!doc.at("require_transfer").is_boolean()) throw ConfigError("require_transfer", "expected a boolean");
    c.require_transfer = doc.at("require_transfer").get<bool>();
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    c.seed = doc.at("seed").get<std::uint64_t>();
  }
  c.output_dir = read_string(doc, "", "output_dir", c.output_dir);
  if (doc.contains("lr_constants")) {
    const json& j = doc.at("lr_constants");
    check_keys(j, "lr_constants", {"kappa_lr", "v"});
    c.lr_constants.kappa_lr = read_number(j, "lr_constants", "kappa_lr", c.lr_constants.kappa_lr);
    c.lr_constants.v = read_number(j, "lr_constants", "v", c.lr_constants.v);
    if (!(c.lr_constants.kappa_lr > 0.0) || !(c.lr_constants.v > 0.0)) {
      throw ConfigError("lr_constants", "kappa_lr and v must be positive");
    }
  }
  c.target = read_number(doc, "", "target", c.target);
  if (!(c.target > 0.0)) throw ConfigError("target", "must be positive");
  if (doc.contains("certify")) {
    const json& j = doc.at("certify");
    check_keys(j, "certify", {"field_from", "field_to", "grid_points"});
    c.certify.field_from = read_number(j, "certify", "field_from", c.certify.field_from);
    c.certify.field_to = read_number(j, "certify", "field_to", c.certify.field_to);
    c.certify.grid_points = read_int(j, "certify", "grid_points", c.certify.grid_points);
    if (c.certify.grid_points < 2) throw ConfigError("certify.grid_points", "must be >= 2");
  }
  if (doc.contains("truncation")) {
    const json& j = doc.at("truncation");
    check_keys(j, "truncation", {"s_grid", "unitary_steps"});
    c.truncation.s_grid = read_list<double>(j, "truncation", "s_grid", c.truncation.s_grid);
    for (double s : c.truncation.s_grid) {
      if (s < 0.0 || s > 1.0) throw ConfigError("truncation.s_grid", "entries must lie in [0, 1]");
    }
    c.truncation.unitary_steps = read_int(j, "truncation", "unitary_steps", c.truncation.unitary_steps);
    if (c.truncation.unitary_steps < 0) throw ConfigError("truncation.unitary_steps", "must be >= 0");
  }
  if (doc.contains("lr")) {
    const json& j = doc.at("lr");
    check_keys(j, "lr", {"a_site", "t_grid", "d_grid"});
    c.lr.a_site = read_int(j, "lr", "a_site", c.lr.a_site);
    c.lr.t_grid = read_list<double>(j, "lr", "t_grid", {});
    c.lr.d_grid = read_list<int>(j, "lr", "d_grid", {});
  }
  c.canonical = doc;
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = config.canonical.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

FamilyBuilder model_family(const ModelConfig& model, int max_sites, std::optional<double> field) {
  if (model.kind == "tfim") {
    return tfim_family(model.coupling, field.value_or(model.field), max_sites);
  }
  return heisenberg_family(model.coupling, model.field_z, field.value_or(model.field_x), max_sites);
}

}  // namespace chainglue::cli
