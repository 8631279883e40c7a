#include "coherence/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <ostream>
#include <sstream>
#include <thread>

#include "coherence/parallel.hpp"

#ifndef COHERENCE_GIT_REVISION
#define COHERENCE_GIT_REVISION "unknown"
#endif

namespace coherence {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

// A sample whose SDP did not certify; carries the state for replay.
struct SampleFailure {
  std::string message;
  nlohmann::json state;
};

template <typename F>
auto evaluate(const DensityMatrix& rho, F&& f) {
  try {
    return f(rho);
  } catch (const sdp::SdpError& e) {
    nlohmann::json j;
    to_json(j, rho);
    throw SampleFailure{e.what(), std::move(j)};
  }
}

class FailureBudget {
public:
  FailureBudget(std::size_t planned, std::string experiment)
      : limit_(kMaxFailureFraction * static_cast<double>(planned)), experiment_(std::move(experiment)) {}

  void record(const SampleFailure& f, std::uint64_t point, std::uint64_t sample, int attempt) {
    const std::size_t n = ++failures_;
    std::clog << "warning: " << experiment_ << " point " << point << " sample " << sample
              << " attempt " << attempt << ": " << f.message << "; redrawing. state="
              << f.state.dump() << "\n";
    if (static_cast<double>(n) > limit_) {
      std::ostringstream os;
      os << experiment_ << ": " << n << " failed solves exceed the "
         << kMaxFailureFraction * 100.0 << "% budget; aborting sweep";
      throw SolverFailure(os.str());
    }
  }

  std::size_t failures() const { return failures_.load(); }

private:
  double limit_;
  std::string experiment_;
  std::atomic<std::size_t> failures_{0};
};

// Draws sample (point, sample), redrawing from a fresh stream on failure.
template <typename Draw>
auto draw_sample(const SweepConfig& cfg, std::uint64_t point, std::uint64_t sample,
                 FailureBudget& budget, Draw&& draw) {
  const std::uint64_t stream = (static_cast<std::uint64_t>(cfg.experiment) << 32) | point;
  for (int attempt = 0;; ++attempt) {
    Rng rng = derive_rng(cfg.seed, stream, sample, static_cast<std::uint64_t>(attempt));
    try {
      return draw(rng);
    } catch (const SampleFailure& f) {
      budget.record(f, point, sample, attempt);
    }
  }
}

PureState mixing_state(const SweepConfig& cfg) {
  if (cfg.pure_state == PureStateChoice::MaximallyEntangled) return maximally_entangled_two_qubit();
  return maximally_coherent(1 << cfg.n_qubits);
}

struct OrderingFlags {
  std::array<bool, 3> violated{};
};

std::array<double, 3> all_measures(const DensityMatrix& rho) {
  return evaluate(rho, [](const DensityMatrix& r) {
    return std::array<double, 3>{l1_coherence(r).value, rel_entropy_coherence(r).value,
                                 roc(r).value};
  });
}

OrderingFlags compare_pair(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  constexpr int l1 = 0, rel = 1, rc = 2;
  OrderingFlags f;
  f.violated[0] = opposite_order(a[l1], b[l1], a[rel], b[rel]);
  f.violated[1] = opposite_order(a[l1], b[l1], a[rc], b[rc]);
  f.violated[2] = opposite_order(a[rel], b[rel], a[rc], b[rc]);
  return f;
}

std::vector<SweepRecord> ordering_sweep(const SweepConfig& cfg, bool over_rank, SweepStats* stats) {
  cfg.validate();
  FailureBudget budget(cfg.samples * cfg.grid.size(), to_string(cfg.experiment));
  std::vector<SweepRecord> records;
  for (std::size_t pi = 0; pi < cfg.grid.size(); ++pi) {
    const int d = over_rank ? cfg.dim : static_cast<int>(cfg.grid[pi]);
    const int r = over_rank ? static_cast<int>(cfg.grid[pi]) : d;
    std::vector<OrderingFlags> flags(cfg.samples);
    parallel_for(cfg.samples, cfg.threads, [&](std::size_t s) {
      flags[s] = draw_sample(cfg, pi, s, budget, [&](Rng& rng) {
        const DensityMatrix a = random_density(d, r, rng);
        const DensityMatrix b = random_density(d, r, rng);
        return compare_pair(all_measures(a), all_measures(b));
      });
    });
    for (std::size_t k = 0; k < kAllPairs.size(); ++k) {
      std::size_t positive = 0;
      for (const auto& f : flags) positive += f.violated[k] ? 1 : 0;
      records.push_back(make_record(cfg.grid[pi], kAllPairs[k], cfg.samples, positive));
    }
  }
  if (stats) stats->redraws = budget.failures();
  return records;
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::SubadditivitySweep: return "SubadditivitySweep";
    case Experiment::OrderingVsDimension: return "OrderingVsDimension";
    case Experiment::OrderingVsRank: return "OrderingVsRank";
    case Experiment::Theorem1Check: return "Theorem1Check";
    case Experiment::Result2Check: return "Result2Check";
  }
  return "Unknown";
}

std::string to_string(PureStateChoice c) {
  return c == PureStateChoice::MaximallyCoherent ? "MaximallyCoherent" : "MaximallyEntangled";
}

std::string to_string(MeasurePair pair) {
  switch (pair) {
    case MeasurePair::L1Rel: return "L1-RelativeEntropy";
    case MeasurePair::L1Roc: return "L1-ROC";
    case MeasurePair::RelRoc: return "RelativeEntropy-ROC";
  }
  return "Unknown";
}

void SweepConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ExperimentError(msg); };
  if (samples < 1) fail("samples must be at least 1");
  if (threads < 1) fail("threads must be at least 1");
  const bool needs_grid = experiment != Experiment::Result2Check || !grid.empty();
  if (needs_grid && grid.empty()) fail("grid must not be empty");
  for (double g : grid) {
    switch (experiment) {
      case Experiment::SubadditivitySweep:
        if (!(g >= 0.0 && g <= 1.0)) fail("mixing weights must lie in [0, 1]");
        break;
      case Experiment::OrderingVsDimension:
        if (!is_integer(g) || g < 2 || g > 64) fail("dimensions must be integers in [2, 64]");
        break;
      case Experiment::OrderingVsRank:
        if (!is_integer(g) || g < 1 || g > dim) fail("ranks must be integers in [1, dim]");
        break;
      case Experiment::Theorem1Check:
        if (!is_integer(g) || g < 1 || g > 6) fail("qubit counts must be integers in [1, 6]");
        break;
      case Experiment::Result2Check:
        if (!is_integer(g) || g < 1 || g > 8) fail("subsystem dimensions must be integers in [1, 8]");
        break;
    }
  }
  if (experiment == Experiment::SubadditivitySweep) {
    if (n_qubits < 1 || n_qubits > 6) fail("n_qubits must lie in [1, 6]");
    if (pure_state == PureStateChoice::MaximallyEntangled && n_qubits != 2)
      fail("the maximally entangled mixing state is defined for two qubits only");
  }
  if (experiment == Experiment::OrderingVsRank && (dim < 2 || dim > 64))
    fail("dimension must lie in [2, 64]");
}

std::vector<double> uniform_grid(int points) {
  if (points < 2) return {0.0};
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = static_cast<double>(i) / (points - 1);
  return grid;
}

SweepConfig default_config(Experiment e) {
  SweepConfig cfg;
  cfg.experiment = e;
  switch (e) {
    case Experiment::SubadditivitySweep:
      cfg.samples = 1000;
      cfg.grid = uniform_grid(51);
      break;
    case Experiment::OrderingVsDimension:
      cfg.samples = 10000;
      cfg.grid = {2, 3, 4, 5, 6, 7, 8, 9, 10};
      break;
    case Experiment::OrderingVsRank:
      cfg.samples = 10000;
      cfg.grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
      break;
    case Experiment::Theorem1Check:
      cfg.samples = 20;
      cfg.grid = {1, 2, 3, 4};
      break;
    case Experiment::Result2Check:
      cfg.samples = 100;
      cfg.grid = {2, 3, 4};
      break;
  }
  return cfg;
}

SweepRecord make_record(double point, std::optional<MeasurePair> pair, std::size_t total,
                        std::size_t positive) {
  SweepRecord r{point, pair, total, positive, 0.0, 0.0};
  if (total > 0) {
    r.fraction = static_cast<double>(positive) / static_cast<double>(total);
    r.std_error = std::sqrt(r.fraction * (1.0 - r.fraction) / static_cast<double>(total));
  }
  return r;
}

std::vector<SweepRecord> run_subadditivity_sweep(const SweepConfig& cfg, SweepStats* stats) {
  cfg.validate();
  if (cfg.experiment != Experiment::SubadditivitySweep)
    throw ExperimentError("run_subadditivity_sweep: wrong experiment kind");
  const PureState phi = mixing_state(cfg);
  const double k_max = SigmaFamilyParams::k_max(cfg.n_qubits);
  FailureBudget budget(cfg.samples * cfg.grid.size(), to_string(cfg.experiment));

  std::vector<SweepRecord> records;
  for (std::size_t pi = 0; pi < cfg.grid.size(); ++pi) {
    const double p = cfg.grid[pi];
    std::vector<char> subadditive(cfg.samples, 0);
    parallel_for(cfg.samples, cfg.threads, [&](std::size_t s) {
      subadditive[s] = draw_sample(cfg, pi, s, budget, [&](Rng& rng) {
        const double k = std::uniform_real_distribution<double>(0.0, k_max)(rng);
        const DensityMatrix rho = mix_with_pure(sigma_family({cfg.n_qubits, k}), phi, p);
        const double lambda =
            evaluate(rho, [](const DensityMatrix& r) { return subadditivity_gap(r); });
        return static_cast<char>(lambda <= kSubadditivityTolerance);
      });
    });
    std::size_t positive = 0;
    for (char c : subadditive) positive += c ? 1 : 0;
    records.push_back(make_record(p, std::nullopt, cfg.samples, positive));
  }
  if (stats) stats->redraws = budget.failures();
  return records;
}

std::vector<SweepRecord> run_ordering_vs_dimension(const SweepConfig& cfg, SweepStats* stats) {
  if (cfg.experiment != Experiment::OrderingVsDimension)
    throw ExperimentError("run_ordering_vs_dimension: wrong experiment kind");
  return ordering_sweep(cfg, false, stats);
}

std::vector<SweepRecord> run_ordering_vs_rank(const SweepConfig& cfg, SweepStats* stats) {
  if (cfg.experiment != Experiment::OrderingVsRank)
    throw ExperimentError("run_ordering_vs_rank: wrong experiment kind");
  return ordering_sweep(cfg, true, stats);
}

std::optional<double> transition_point(const std::vector<SweepRecord>& records) {
  std::optional<double> best;
  for (const auto& r : records)
    if (r.fraction < 0.5 && (!best || r.sweep_point < *best)) best = r.sweep_point;
  return best;
}

std::vector<Theorem1Row> run_theorem1_check(const SweepConfig& cfg) {
  cfg.validate();
  if (cfg.experiment != Experiment::Theorem1Check)
    throw ExperimentError("run_theorem1_check: wrong experiment kind");
  std::vector<Theorem1Row> rows(cfg.grid.size() * cfg.samples);
  parallel_for(rows.size(), cfg.threads, [&](std::size_t idx) {
    const std::size_t pi = idx / cfg.samples;
    const std::size_t s = idx % cfg.samples;
    const int n = static_cast<int>(cfg.grid[pi]);
    Rng rng = derive_rng(cfg.seed, static_cast<std::uint64_t>(cfg.experiment) << 32 | pi, s);
    const double k = std::uniform_real_distribution<double>(0.0, SigmaFamilyParams::k_max(n))(rng);
    const DensityMatrix rho = sigma_family({n, k});
    Theorem1Row row;
    row.n = n;
    row.k = k;
    row.solution = sdp::solve(sdp::build(rho));
    if (row.solution.status != sdp::SolveStatus::Optimal)
      throw SolverFailure("theorem1: SDP did not certify for n=" + std::to_string(n) +
                            " k=" + fmt(k) + " (" + sdp::to_string(row.solution.status) + ")");
    row.sdp_value = row.solution.roc();
    row.closed_form = theorem1_closed_form(n, k);
    row.difference = std::abs(row.sdp_value - row.closed_form);
    row.lambda = subadditivity_gap(rho);
    rows[idx] = std::move(row);
  });
  return rows;
}

std::vector<Result2Row> run_result2_check(const SweepConfig& cfg) {
  cfg.validate();
  if (cfg.experiment != Experiment::Result2Check)
    throw ExperimentError("run_result2_check: wrong experiment kind");
  const std::vector<double> dims = cfg.grid.empty() ? std::vector<double>{2, 3, 4} : cfg.grid;

  std::vector<Result2Row> rows;
  std::size_t combo = 0;
  for (double da_value : dims)
    for (double db_value : dims) {
      const int da = static_cast<int>(da_value);
      const int db = static_cast<int>(db_value);
      // deviations[s][m]
      std::vector<std::array<double, 3>> deviations(cfg.samples);
      parallel_for(cfg.samples, cfg.threads, [&](std::size_t s) {
        Rng rng = derive_rng(cfg.seed, static_cast<std::uint64_t>(cfg.experiment) << 32 | combo, s);
        const DensityMatrix a = random_density(da, da, rng);
        ComplexMatrix sigma = ComplexMatrix::Zero(db, db);
        // The first sample uses the pure ancilla |0><0|.
        if (s == 0)
          sigma(0, 0) = 1.0;
        else
          sigma.diagonal() = random_probability_vector(db, rng).cast<Complex>();
        const DensityMatrix joint(kron(a.matrix(), sigma), {da, db});
        for (std::size_t m = 0; m < kAllMeasures.size(); ++m)
          deviations[s][m] =
              std::abs(measure(kAllMeasures[m], joint).value - measure(kAllMeasures[m], a).value);
      });
      for (std::size_t m = 0; m < kAllMeasures.size(); ++m) {
        Result2Row row{kAllMeasures[m], da, db, cfg.samples, 0.0};
        for (const auto& dev : deviations) row.max_deviation = std::max(row.max_deviation, dev[m]);
        rows.push_back(row);
      }
      ++combo;
    }
  return rows;
}

void write_sweep_csv(std::ostream& os, const SweepConfig& cfg,
                     const std::vector<SweepRecord>& records) {
  os << "experiment,sweep_point,measure_pair,count_total,count_positive,fraction,stderr,seed\n";
  for (const auto& r : records) {
    os << to_string(cfg.experiment) << ',' << fmt(r.sweep_point) << ','
       << (r.pair ? to_string(*r.pair) : std::string()) << ',' << r.count_total << ','
       << r.count_positive << ',' << fmt(r.fraction) << ',' << fmt(r.std_error) << ','
       << cfg.seed << '\n';
  }
}

void write_theorem1_csv(std::ostream& os, const SweepConfig& cfg,
                        const std::vector<Theorem1Row>& rows) {
  os << "experiment,n,k,sdp_value,closed_form,abs_difference,lambda,gap,status,seed\n";
  for (const auto& r : rows)
    os << to_string(cfg.experiment) << ',' << r.n << ',' << fmt(r.k) << ',' << fmt(r.sdp_value)
       << ',' << fmt(r.closed_form) << ',' << fmt(r.difference) << ',' << fmt(r.lambda) << ','
       << fmt(r.solution.gap) << ',' << sdp::to_string(r.solution.status) << ',' << cfg.seed
       << '\n';
}

void write_result2_csv(std::ostream& os, const SweepConfig& cfg,
                       const std::vector<Result2Row>& rows) {
  os << "experiment,measure,d_a,d_b,samples,max_deviation,seed\n";
  for (const auto& r : rows)
    os << to_string(cfg.experiment) << ',' << to_string(r.measure) << ',' << r.d_a << ','
       << r.d_b << ',' << r.samples << ',' << fmt(r.max_deviation) << ',' << cfg.seed << '\n';
}

nlohmann::json config_to_json(const SweepConfig& cfg) {
  return nlohmann::json{
      {"experiment", to_string(cfg.experiment)},
      {"samples", cfg.samples},
      {"seed", cfg.seed},
      {"grid", cfg.grid},
      {"pure_state", to_string(cfg.pure_state)},
      {"n_qubits", cfg.n_qubits},
      {"dim", cfg.dim},
      {"threads", cfg.threads},
  };
}

std::string git_revision() { return COHERENCE_GIT_REVISION; }

unsigned default_thread_count() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace coherence
