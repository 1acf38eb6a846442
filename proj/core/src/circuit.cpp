#include "chainglue/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chainglue {

namespace {

Vector product_of(const Vector& block, int copies) {
  Vector out = block;
  for (int c = 1; c < copies; ++c) out = kron(out, block);
  return out;
}

void check_observable(const Observable& obs, int n) {
  validate_support(obs.support, n);
  if (obs.matrix.rows() != obs.matrix.cols() || obs.matrix.rows() != dim_of(obs.support.width())) {
    throw DimensionError("observable matrix does not match its support");
  }
  if (hermiticity_defect(obs.matrix) > 1e-12) throw std::invalid_argument("observable is not Hermitian");
}

void check_circuit(const LocalCircuit& c) {
  if (c.m < 1 || c.copies < 1) throw std::invalid_argument("circuit: m and copies must be positive");
  if (c.base_block_state.size() != dim_of(c.m)) {
    throw DimensionError("circuit: base block state does not match m");
  }
}

}  // namespace

Vector product_state(const LocalCircuit& circuit) {
  check_circuit(circuit);
  return product_of(circuit.base_block_state, circuit.copies);
}

Vector apply_circuit_dense(const LocalCircuit& circuit, int max_sites) {
  check_circuit(circuit);
  const int n = circuit.n();
  if (n > max_sites) {
    throw ResourceLimitError("apply_circuit_dense: " + std::to_string(n) +
                             " sites exceeds the cap of " + std::to_string(max_sites) +
                             "; use local_expectation for local observables");
  }
  Vector psi = product_state(circuit);
  for (const auto& s : circuit.stages) {
    validate_support(s.support, n);
    psi = apply_local(psi, s.unitary, s.support.lo, n);
  }
  return psi;
}

LightCone light_cone(const LocalCircuit& circuit, const SupportInterval& support) {
  LightCone cone;
  cone.region = support;
  for (std::size_t i = circuit.stages.size(); i-- > 0;) {
    const auto& s = circuit.stages[i].support;
    if (s.intersects(cone.region)) {
      cone.stages.push_back(i);
      cone.region = cone.region.hull(s);
    }
  }
  std::reverse(cone.stages.begin(), cone.stages.end());
  return cone;
}

LocalExpectation local_expectation(const LocalCircuit& circuit, const Observable& obs,
                                   int max_sites) {
  check_circuit(circuit);
  const int n = circuit.n();
  check_observable(obs, n);
  const LightCone cone = light_cone(circuit, obs.support);

  const int m = circuit.m;
  const int first_block = cone.region.lo / m;
  const int last_block = cone.region.hi / m;
  const SupportInterval region{first_block * m, (last_block + 1) * m - 1};
  const int width = region.width();
  if (width > max_sites) {
    throw ResourceLimitError("local_expectation: light cone spans " + std::to_string(width) +
                             " sites, cap is " + std::to_string(max_sites));
  }

  Vector psi = product_of(circuit.base_block_state, last_block - first_block + 1);
  for (std::size_t i : cone.stages) {
    const auto& s = circuit.stages[i];
    psi = apply_local(psi, s.unitary, s.support.lo - region.lo, width);
  }
  const Observable shifted{obs.matrix, {obs.support.lo - region.lo, obs.support.hi - region.lo}};

  LocalExpectation out;
  out.value = dense_expectation(psi, shifted, width);
  out.touched = cone.stages;
  out.region = region;
  return out;
}

double dense_expectation(const Vector& psi, const Observable& obs, int n) {
  check_observable(obs, n);
  const Vector o_psi = apply_local(psi, obs.matrix, obs.support.lo, n);
  return std::real(psi.dot(o_psi));
}

double fidelity(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("fidelity: dimension mismatch");
  return std::abs(a.dot(b));
}

double phase_distance(const Vector& a, const Vector& b) {
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * fidelity(a, b)));
}

std::size_t circuit_storage_bytes(const LocalCircuit& circuit) {
  std::size_t bytes = static_cast<std::size_t>(circuit.base_block_state.size()) * sizeof(cplx);
  for (const auto& s : circuit.stages) {
    bytes += static_cast<std::size_t>(s.unitary.size()) * sizeof(cplx);
  }
  return bytes;
}

}  // namespace chainglue
