#include "chainglue/circuit_json.hpp"

#include <fstream>
#include <stdexcept>

namespace chainglue {

namespace {

using nlohmann::json;

json complex_list(const cplx* data, Eigen::Index count) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < count; ++i) arr.push_back({data[i].real(), data[i].imag()});
  return arr;
}

std::vector<cplx> read_complex_list(const json& arr, const char* field) {
  if (!arr.is_array()) throw std::invalid_argument(std::string("circuit json: ") + field + " must be an array");
  std::vector<cplx> out;
  out.reserve(arr.size());
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw std::invalid_argument(std::string("circuit json: ") + field +
                                  " entries must be [re, im] pairs");
    }
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

}  // namespace

json circuit_to_json(const LocalCircuit& c) {
  json doc;
  doc["schema_version"] = kCircuitSchemaVersion;
  doc["m"] = c.m;
  doc["copies"] = c.copies;
  doc["base_block_state"] = complex_list(c.base_block_state.data(), c.base_block_state.size());
  json stages = json::array();
  for (const auto& s : c.stages) {
    json j;
    j["level"] = s.level;
    j["block_size"] = s.block_size;
    j["support"] = {s.support.lo, s.support.hi};
    j["gamma"] = s.gamma;
    j["alpha"] = s.alpha ? json(*s.alpha) : json(nullptr);
    // Row-major: transpose the column-major storage first.
    const Matrix rm = s.unitary.transpose();
    j["unitary"] = complex_list(rm.data(), rm.size());
    stages.push_back(std::move(j));
  }
  doc["stages"] = std::move(stages);
  return doc;
}

LocalCircuit circuit_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("circuit json: top level must be an object");
  if (doc.value("schema_version", -1) != kCircuitSchemaVersion) {
    throw std::invalid_argument("circuit json: unsupported schema_version (expected " +
                                std::to_string(kCircuitSchemaVersion) + ")");
  }
  LocalCircuit c;
  c.m = doc.at("m").get<int>();
  c.copies = doc.at("copies").get<int>();
  if (c.m < 1 || c.copies < 1) throw std::invalid_argument("circuit json: m and copies must be positive");
  const auto base = read_complex_list(doc.at("base_block_state"), "base_block_state");
  if (static_cast<Eigen::Index>(base.size()) != dim_of(c.m)) {
    throw std::invalid_argument("circuit json: base_block_state length must be 2^m");
  }
  c.base_block_state = Eigen::Map<const Vector>(base.data(), static_cast<Eigen::Index>(base.size()));

  for (const auto& j : doc.at("stages")) {
    GluingStage s;
    s.level = j.at("level").get<int>();
    s.block_size = j.value("block_size", 0);
    const auto& sup = j.at("support");
    if (!sup.is_array() || sup.size() != 2) throw std::invalid_argument("circuit json: support must be [lo, hi]");
    s.support = {sup[0].get<int>(), sup[1].get<int>()};
    validate_support(s.support, c.n());
    s.gamma = j.at("gamma").get<double>();
    if (!j.at("alpha").is_null()) s.alpha = j.at("alpha").get<int>();
    const auto u = read_complex_list(j.at("unitary"), "unitary");
    const Eigen::Index d = dim_of(s.support.width());
    if (static_cast<Eigen::Index>(u.size()) != d * d) {
      throw std::invalid_argument("circuit json: unitary size does not match its support");
    }
    s.unitary = Eigen::Map<const Matrix>(u.data(), d, d).transpose();
    if (unitarity_defect(s.unitary) > 1e-9) throw std::invalid_argument("circuit json: stage matrix is not unitary");
    c.stages.push_back(std::move(s));
  }
  return c;
}

void save_circuit(const LocalCircuit& circuit, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_circuit: cannot open " + path.string());
  out << circuit_to_json(circuit).dump(1) << '\n';
}

LocalCircuit load_circuit(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_circuit: cannot open " + path.string());
  return circuit_from_json(json::parse(in));
}

}  // namespace chainglue
