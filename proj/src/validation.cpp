#include "coherence/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "coherence/measures.hpp"
#include "coherence/parallel.hpp"

namespace coherence {

namespace {

enum PropertyId : std::uint64_t {
  kZeroOnIncoherent = 1,
  kUnitaryInvariance,
  kConvexity,
  kBlockAdditivity,
  kPureSuperadditivity,
  kIncoherentAncilla,
  kRocBelowL1,
};

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

DensityMatrix random_state(Rng& rng, int d_min, int d_max) {
  const int d = uniform_int(rng, d_min, d_max);
  const int r = uniform_int(rng, 1, d);
  return random_density(d, r, rng);
}

double max_measure_deviation(const std::function<double(MeasureKind)>& deviation) {
  double worst = 0.0;
  for (MeasureKind kind : kAllMeasures) worst = std::max(worst, deviation(kind));
  return worst;
}

// Runs `trial` on every instance; a trial returns its violation (>= 0).
PropertyResult run_property(std::string name, PropertyId id, double tolerance,
                            const ValidationConfig& cfg,
                            const std::function<double(Rng&)>& trial) {
  std::vector<double> violations(cfg.instances, 0.0);
  parallel_for(cfg.instances, cfg.threads, [&](std::size_t i) {
    Rng rng = derive_rng(cfg.seed, id, i);
    violations[i] = trial(rng);
  });
  PropertyResult result{std::move(name), cfg.instances, 0, 0.0, tolerance};
  for (double v : violations) {
    result.worst = std::max(result.worst, v);
    if (!(v <= tolerance)) ++result.failures;
  }
  return result;
}

ComplexMatrix block_diagonal(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace

PropertyResult check_zero_on_incoherent(const ValidationConfig& cfg) {
  return run_property("C1 zero on incoherent states", kZeroOnIncoherent, 1e-9, cfg, [](Rng& rng) {
    const DensityMatrix delta = dephase(random_state(rng, 2, 8));
    return max_measure_deviation([&](MeasureKind k) { return std::abs(measure(k, delta).value); });
  });
}

PropertyResult check_incoherent_unitary_invariance(const ValidationConfig& cfg) {
  return run_property("C2 incoherent unitary invariance", kUnitaryInvariance, 1e-8, cfg, [](Rng& rng) {
    const DensityMatrix rho = random_state(rng, 2, 8);
    const int d = rho.dim();
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    ComplexMatrix u = ComplexMatrix::Zero(d, d);
    for (int j = 0; j < d; ++j) u(perm[j], j) = std::polar(1.0, phase(rng));
    const DensityMatrix rotated(u * rho.matrix() * u.adjoint());
    return max_measure_deviation([&](MeasureKind k) {
      return std::abs(measure(k, rotated).value - measure(k, rho).value);
    });
  });
}

PropertyResult check_convexity(const ValidationConfig& cfg) {
  return run_property("C3 convexity", kConvexity, 1e-8, cfg, [](Rng& rng) {
    const int d = uniform_int(rng, 2, 8);
    std::vector<DensityMatrix> parts;
    for (int i = 0; i < 3; ++i) parts.push_back(random_density(d, uniform_int(rng, 1, d), rng));
    const RealVector p = random_probability_vector(3, rng);
    ComplexMatrix mix = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < 3; ++i) mix += p(i) * parts[i].matrix();
    const DensityMatrix mixed(mix);
    return max_measure_deviation([&](MeasureKind k) {
      double rhs = 0.0;
      for (int i = 0; i < 3; ++i) rhs += p(i) * measure(k, parts[i]).value;
      return std::max(0.0, measure(k, mixed).value - rhs);
    });
  });
}

PropertyResult check_block_additivity(const ValidationConfig& cfg) {
  return run_property("Block-direct-sum additivity", kBlockAdditivity, 1e-7, cfg, [](Rng& rng) {
    const DensityMatrix a = random_state(rng, 2, 4);
    const DensityMatrix b = random_state(rng, 2, 4);
    const double p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const DensityMatrix sum(block_diagonal(p * a.matrix(), (1.0 - p) * b.matrix()));
    return max_measure_deviation([&](MeasureKind k) {
      return std::abs(measure(k, sum).value - p * measure(k, a).value -
                      (1.0 - p) * measure(k, b).value);
    });
  });
}

PropertyResult check_pure_superadditivity(const ValidationConfig& cfg) {
  return run_property("ROC super-additive on pure states", kPureSuperadditivity, 1e-7, cfg,
                      [](Rng& rng) {
                        const DensityMatrix psi(haar_random_pure(4, rng), {2, 2});
                        return std::max(0.0, -subadditivity_gap(psi));
                      });
}

PropertyResult check_incoherent_ancilla(const ValidationConfig& cfg) {
  return run_property("Incoherent ancilla invariance", kIncoherentAncilla, 1e-7, cfg, [](Rng& rng) {
    const DensityMatrix a = random_state(rng, 2, 4);
    const int db = uniform_int(rng, 2, 4);
    ComplexMatrix sigma = ComplexMatrix::Zero(db, db);
    sigma.diagonal() = random_probability_vector(db, rng).cast<Complex>();
    const DensityMatrix joint(kron(a.matrix(), sigma), {a.dim(), db});
    return max_measure_deviation([&](MeasureKind k) {
      return std::abs(measure(k, joint).value - measure(k, a).value);
    });
  });
}

PropertyResult check_roc_below_l1(const ValidationConfig& cfg) {
  return run_property("ROC bounded by l1", kRocBelowL1, 1e-7, cfg, [](Rng& rng) {
    const DensityMatrix rho = random_state(rng, 2, 8);
    return std::max(0.0, roc(rho).value - l1_coherence(rho).value);
  });
}

std::vector<PropertyResult> run_axiom_suite(const ValidationConfig& cfg) {
  return {check_zero_on_incoherent(cfg),   check_incoherent_unitary_invariance(cfg),
          check_convexity(cfg),            check_block_additivity(cfg),
          check_pure_superadditivity(cfg), check_incoherent_ancilla(cfg),
          check_roc_below_l1(cfg)};
}

}  // namespace coherence
