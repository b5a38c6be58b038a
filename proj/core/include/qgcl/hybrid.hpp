#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qgcl/cdcl.hpp"
#include "qgcl/extract.hpp"
#include "qgcl/grover.hpp"

namespace qgcl {

struct HybridConfig {
  SolverConfig solver;
  /// k: conflicts between call points.
  std::uint64_t grover_interval = 250;
  std::uint32_t max_grover_calls = 15;
  /// Base mixing strength; the effective strength is eta0 * (1 - q).
  double eta0 = 0.8;
  /// Polarity hints are written only when q is at or below this value.
  double polarity_q_threshold = 0.1;
  /// extraction.budget is the Grover budget B (n_sub + m_sub).
  ExtractionConfig extraction;
  GroverConfig grover;

  std::size_t budget() const { return extraction.budget; }
  void validate() const;
};

struct CallRecord {
  std::uint32_t call_idx = 0;
  std::uint64_t conflict_index = 0;
  std::uint32_t n_sub = 0;
  std::uint32_t m_sub = 0;
  ViolationFraction q;
  std::uint32_t attempts = 0;
  std::uint64_t iterations = 0;
  bool polarity_applied = false;

  friend bool operator==(const CallRecord&, const CallRecord&) = default;
};

struct CallSchedule {
  std::uint64_t last_call_conflicts = 0;
  std::uint32_t calls_used = 0;
};

/// True iff `conflicts` is a positive multiple of k beyond the last call point
/// and the call budget is not exhausted.
bool should_call_grover(std::uint64_t conflicts, const CallSchedule& schedule, const HybridConfig& config);

/// eta0 * (1 - q), clamped to [0,1].
double hint_strength(double eta0, double q);

/// (1 - eta) * pi + eta * pi_hat.
double mix_preferences(double pi, double pi_hat, double eta);

struct HintReport {
  bool polarity_applied = false;
  std::uint32_t polarity_writes = 0;
  std::uint32_t activity_bumps = 0;
};

/// Feeds a Grover outcome back into heuristic state only: VSIDS activities of
/// the subformula's variables and, for low q, saved phases of variables that
/// occur at least twice. The clause database and trail are left untouched.
HintReport apply_hints(Solver& solver, const SubFormula& sub, const Assignment& beta_q, double q,
                       const HybridConfig& config);

struct HybridResult {
  SolveResult result;
  std::vector<CallRecord> calls;
  /// Call points where extraction produced nothing usable.
  std::uint64_t skipped_calls = 0;
  std::map<ExtractionStatus, std::uint64_t> skip_reasons;
  /// Apply-hints invocations whose before/after clause-database hash differed.
  std::uint64_t feedback_hash_mismatches = 0;
};

HybridResult solve_hybrid(const Cnf& cnf, const HybridConfig& config);

// Planning model for hybrid runtime. These are estimates from supplied
// constants, not measurements.

struct CallCostParams {
  double extraction_cost = 0.0;
  double feedback_cost = 0.0;
  /// Cost of one oracle+diffuser iteration.
  double c_iter = 0.0;
  std::uint32_t n = 0;
  std::uint64_t num_solutions = 0;
  /// Heuristic mass on the productive subset before amplification.
  double mu = 0.0;
  std::uint64_t iterations = 0;
  /// Local conflict density proxy.
  double conflict_density = 0.0;
};

struct CostModelParams {
  double t_cdcl = 0.0;
  /// Absorbs repeated sampling and classical checking.
  double gamma = 1.0;
  /// Mean cost of one CDCL conflict.
  double conflict_cost = 0.0;
  std::vector<CallCostParams> calls;
};

/// gamma * c_iter * sqrt(2^n / max(K,1)).
double grover_call_cost(double gamma, double c_iter, std::uint32_t n, std::uint64_t num_solutions);
/// conflict_density * (amplified mass - mu).
double expected_conflict_reduction(const CallCostParams& call);
double estimate_hybrid_runtime(const CostModelParams& params);

/// Subformula size where m * 2^(n/2) meets 2^n: 2 log2(m).
double crossover_size(std::uint64_t m);

}  // namespace qgcl
