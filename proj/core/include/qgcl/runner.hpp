#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qgcl/cdcl.hpp"
#include "qgcl/dimacs.hpp"
#include "qgcl/hybrid.hpp"

namespace qgcl {

enum class SolveMode { Cdcl, Qgcl };

std::string_view to_string(SolveMode m);
SolveMode parse_mode(std::string_view s);

inline constexpr std::string_view kRunCsvHeader =
    "instance,mode,seed,n,m,restarts,conflicts,decisions,propagations,grover_calls,grover_iters,wall_time_s,result";
inline constexpr std::string_view kCallCsvHeader =
    "call_idx,conflict_index,n_sub,m_sub,q,attempts,iterations,polarity_applied";

struct RunRow {
  std::string instance;
  SolveMode mode = SolveMode::Cdcl;
  std::uint64_t seed = 0;
  std::uint32_t n = 0;
  std::size_t m = 0;
  std::uint64_t restarts = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t grover_calls = 0;
  std::uint64_t grover_iters = 0;
  double wall_time_s = 0.0;
  SolveStatus result = SolveStatus::Unknown;

  /// Field-wise equality except wall time.
  bool same_counters(const RunRow& o) const;
};

std::string to_csv(const RunRow& row);
RunRow parse_run_row(std::string_view line);
std::string to_csv(const CallRecord& rec);

struct RunOutput {
  RunRow row;
  std::vector<CallRecord> calls;
  Assignment model;
  std::uint64_t skipped_calls = 0;
  std::uint64_t feedback_hash_mismatches = 0;
};

/// Solves one instance in the requested mode. `config.solver.random_seed` is
/// the run seed. Any SAT model has already passed check_model.
RunOutput run_instance(const Cnf& cnf, const std::string& name, SolveMode mode, const HybridConfig& config);

/// Counters reported per summary row, in CSV order.
inline constexpr std::array<std::string_view, 7> kSummaryMetrics = {
    "restarts", "conflicts", "decisions", "propagations", "grover_calls", "grover_iters", "wall_time_s"};

double metric_value(const RunRow& row, std::size_t metric);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for a single sample
};

MeanSd mean_sd(const std::vector<double>& xs);

/// One solver run of a sweep, identified by (param value, mode, seed).
struct SweepJob {
  std::string value;
  SolveMode mode = SolveMode::Cdcl;
  std::string instance;
  std::shared_ptr<const Cnf> cnf;
  HybridConfig config;
};

struct SweepRow {
  std::string param;
  std::string value;
  RunOutput output;
};

/// Runs jobs on `workers` threads; results come back in job order.
std::vector<RunOutput> run_jobs(const std::vector<SweepJob>& jobs, unsigned workers);

struct SummaryRow {
  std::string param;
  std::string value;
  SolveMode mode = SolveMode::Cdcl;
  std::size_t runs = 0;
  std::array<MeanSd, kSummaryMetrics.size()> metrics;
};

/// Groups rows by (value, mode) in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<SweepRow>& rows);

std::string sweep_raw_header();
std::string to_csv(const SweepRow& row);
std::string summary_header();
std::string to_csv(const SummaryRow& row);

}  // namespace qgcl
