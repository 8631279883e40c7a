#pragma once

// Sampled checks of the coherence-measure axioms and of the structural
// results on bipartite states. Each property is evaluated on independent
// random instances and reports its worst observed deviation.

#include <cstdint>
#include <string>
#include <vector>

namespace coherence {

struct PropertyResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  /// Largest violation observed (0 when the property held with slack).
  double worst = 0.0;
  double tolerance = 0.0;

  bool passed() const { return failures == 0; }
};

struct ValidationConfig {
  std::uint64_t seed = 1;
  std::size_t instances = 100;
  unsigned threads = 1;
};

/// Zero on dephased states, all three measures.
PropertyResult check_zero_on_incoherent(const ValidationConfig& cfg);
/// Invariance under permutation-times-phase unitaries, d <= 8.
PropertyResult check_incoherent_unitary_invariance(const ValidationConfig& cfg);
/// C(sum p_i rho_i) <= sum p_i C(rho_i) on three-state mixtures.
PropertyResult check_convexity(const ValidationConfig& cfg);
/// C(p1 rho1 (+) p2 rho2) = p1 C(rho1) + p2 C(rho2).
PropertyResult check_block_additivity(const ValidationConfig& cfg);
/// Super-additivity of ROC on Haar-random two-qubit pure states.
PropertyResult check_pure_superadditivity(const ValidationConfig& cfg);
/// C(rho_A (x) sigma_B) = C(rho_A) for diagonal sigma_B.
PropertyResult check_incoherent_ancilla(const ValidationConfig& cfg);
/// C_ROC <= C_l1.
PropertyResult check_roc_below_l1(const ValidationConfig& cfg);

std::vector<PropertyResult> run_axiom_suite(const ValidationConfig& cfg);

}  // namespace coherence
