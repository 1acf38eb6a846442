#pragma once

// Evaluation of LocalCircuit states: dense reconstruction, light-cone
// expectation values and state comparisons.

#include "chainglue/gluing.hpp"

#include <cstddef>
#include <vector>

namespace chainglue {

struct Observable {
  Matrix matrix;  // Hermitian on support.width() sites
  SupportInterval support;
};

/// Tensor product of `copies` base block states.
Vector product_state(const LocalCircuit& circuit);

/// Stage unitaries applied in order to the product state. Throws
/// ResourceLimitError when the chain exceeds `max_sites`; use
/// local_expectation for larger chains.
Vector apply_circuit_dense(const LocalCircuit& circuit, int max_sites = kDefaultMaxSites);

/// Stage indices whose supports chain-intersect `support` when walking the
/// stages in reverse, ascending, and the merged region they cover.
struct LightCone {
  std::vector<std::size_t> stages;
  SupportInterval region;
};
LightCone light_cone(const LocalCircuit& circuit, const SupportInterval& support);

struct LocalExpectation {
  double value = 0.0;
  std::vector<std::size_t> touched;  // stage indices contracted
  SupportInterval region;            // block-aligned sub-chain that was built
};

/// <psi|O|psi> from the dense state of the causally connected sub-chain only.
LocalExpectation local_expectation(const LocalCircuit& circuit, const Observable& obs,
                                   int max_sites = kDefaultMaxSites);

/// <psi|O|psi> on an explicit dense state.
double dense_expectation(const Vector& psi, const Observable& obs, int n);

/// |<a|b>|.
double fidelity(const Vector& a, const Vector& b);
/// min over phi of || a - e^{i phi} b || = sqrt(2 - 2 |<a|b>|) for unit vectors.
double phase_distance(const Vector& a, const Vector& b);

/// Bytes held by the base state and stage unitaries.
std::size_t circuit_storage_bytes(const LocalCircuit& circuit);

}  // namespace chainglue
