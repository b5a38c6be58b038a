#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "qgcl/cdcl.hpp"
#include "qgcl/dimacs.hpp"

namespace qgcl {

enum class ExtractionStrategy { ActivityBfs, ActivityGreedy, RandomSample, VariableFrontier };

/// CLI spelling: abfs, ag, rand, vf.
std::string_view to_cli_name(ExtractionStrategy s);
ExtractionStrategy parse_strategy(std::string_view name);

struct ExtractionConfig {
  /// Cap on n_sub + m_sub.
  std::size_t budget = 20;
  ExtractionStrategy strategy = ExtractionStrategy::ActivityBfs;
  /// How many of the most recent learned clauses compete for the seed.
  std::size_t max_seed_candidates = 8;

  void validate() const;
};

/// A trail-simplified piece of the formula over dense variables 1..n_sub.
struct SubFormula {
  Cnf cnf;
  /// var_map[i] is the global variable behind dense variable i+1.
  std::vector<std::uint32_t> var_map;
  /// Snapshot index of the clause the extraction started from.
  std::size_t seed_clause = 0;

  std::uint32_t num_vars() const { return cnf.num_vars; }
  std::size_t num_clauses() const { return cnf.clauses.size(); }
  std::size_t size() const { return num_vars() + num_clauses(); }
  /// Number of clauses each dense variable occurs in (index = dense var - 1).
  std::vector<std::uint32_t> occurrence_counts() const;
};

enum class ExtractionStatus {
  Extracted,
  NothingUnsatisfied,  // every clause is satisfied by the trail
  Trivial,             // < 2 variables, or only unit clauses
  OverBudget,          // not even the first candidate clause fits
  FalsifiedClause,     // a clause is fully false: caller was not at a fixpoint
};

const char* to_string(ExtractionStatus s);

struct ExtractionResult {
  ExtractionStatus status = ExtractionStatus::NothingUnsatisfied;
  std::optional<SubFormula> sub;
};

/// Drops clauses satisfied by `values` and removes false literals from the
/// rest. Returns nullopt if some clause loses all its literals.
std::optional<std::vector<Clause>> simplify_under_trail(std::span<const Clause> clauses,
                                                        std::span<const LBool> values);

/// Seed choice: the unsatisfied clause of highest activity among the most
/// recent learned clauses, else the first unsatisfied clause containing the
/// most active unassigned variable.
std::optional<std::size_t> select_seed(const SolverSnapshot& snap, std::size_t max_seed_candidates);

ExtractionResult extract_subformula(const SolverSnapshot& snap, const ExtractionConfig& config, std::mt19937_64& rng);

/// Same, starting from an explicit seed clause (used by activity_bfs only;
/// the other strategies ignore the seed).
ExtractionResult extract_subformula(const SolverSnapshot& snap, const ExtractionConfig& config, std::mt19937_64& rng,
                                    std::size_t seed);

}  // namespace qgcl
