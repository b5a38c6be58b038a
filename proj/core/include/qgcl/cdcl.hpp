#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qgcl/dimacs.hpp"

namespace qgcl {

enum class LBool : std::uint8_t { False = 0, True = 1, Undef = 2 };

inline constexpr LBool to_lbool(bool b) { return b ? LBool::True : LBool::False; }

struct SolverConfig {
  double var_decay = 0.95;
  double clause_activity_decay = 0.999;
  std::uint32_t restart_base = 100;
  std::uint64_t random_seed = 0;
  bool initial_phase = false;
  /// Initial variable activities are drawn from [0, jitter); 0 keeps every
  /// score at zero so ties fall back to the lowest index.
  double initial_activity_jitter = 1e-6;
  /// Learned clauses may grow to this multiple of the original clause count
  /// before the lower-activity half is dropped.
  double learned_cap_factor = 4.0;
  /// 0 means unlimited; otherwise solve stops with Unknown at this many conflicts.
  std::uint64_t conflict_budget = 0;

  void validate() const;
};

struct Stats {
  std::uint64_t restarts = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t grover_calls = 0;
  std::uint64_t grover_iterations = 0;
  double wall_time = 0.0;

  /// Equality over all counters, ignoring wall time.
  bool same_counters(const Stats& o) const {
    return restarts == o.restarts && conflicts == o.conflicts && decisions == o.decisions &&
           propagations == o.propagations && grover_calls == o.grover_calls &&
           grover_iterations == o.grover_iterations;
  }
};

enum class SolveStatus { Sat, Unsat, Unknown };

const char* to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  Assignment model;  // non-empty iff Sat
  Stats stats;
};

using ClauseRef = std::uint32_t;
inline constexpr ClauseRef kNoClause = UINT32_MAX;

struct ConflictAnalysis {
  /// Asserting literal first; the literal at index 1 (if any) sits on backjump_level.
  Clause learned;
  int backjump_level = 0;
  /// Set when the conflict happened at decision level 0.
  bool unsat = false;
};

/// Read-only copy of the solver's clause database and heuristic state, used
/// by subformula extraction. Clause indices are stable for the snapshot only.
struct SolverSnapshot {
  std::uint32_t num_vars = 0;
  std::vector<Clause> clauses;
  std::vector<double> clause_activity;
  std::vector<bool> learned;
  std::vector<double> var_activity;  // index var-1
  std::vector<LBool> values;         // index var-1
  /// Learned clause indices, oldest first.
  std::vector<std::size_t> learned_order;

  LBool value(const Literal& l) const {
    LBool v = values[l.var - 1];
    if (v == LBool::Undef) return v;
    return to_lbool((v == LBool::True) == l.positive);
  }
};

class Solver;

/// Hook points inside the search loop. The hybrid controller plugs in here.
class SearchObserver {
 public:
  virtual ~SearchObserver() = default;
  /// After learning, backjumping and the restart check.
  virtual void on_conflict_handled(Solver&) {}
  /// At a conflict-free propagation fixpoint, before the next decision.
  virtual void on_fixpoint(Solver&) {}
};

/// i-th element (1-based) of the Luby sequence 1,1,2,1,1,2,4,...
std::uint64_t luby(std::uint64_t i);

/// True iff the model satisfies every clause. Throws std::invalid_argument
/// on a length mismatch.
bool check_model(const Cnf& cnf, const Assignment& model);

class Solver {
 public:
  explicit Solver(const Cnf& cnf, SolverConfig config = {});

  SolveResult solve(SearchObserver* observer = nullptr);

  // Individual CDCL steps; solve() drives these.
  std::optional<ClauseRef> propagate();
  ConflictAnalysis analyze_conflict(ClauseRef conflict);
  void learn_and_backjump(const ConflictAnalysis& analysis);
  std::optional<Literal> pick_branch_literal();
  void decide(Literal lit);
  void backtrack(int level);

  bool okay() const { return ok_; }
  std::uint32_t num_vars() const { return num_vars_; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  LBool value(std::uint32_t var) const { return assigns_[var - 1]; }
  LBool value(const Literal& l) const;
  int level_of(std::uint32_t var) const { return level_[var - 1]; }
  std::vector<Literal> trail() const;
  bool all_assigned() const { return trail_.size() == num_vars_; }

  // Heuristic state.
  double activity(std::uint32_t var) const { return activity_[var - 1]; }
  void set_activity(std::uint32_t var, double value);
  void bump_activity(std::uint32_t var, double amount);
  /// Current VSIDS increment; grows as activities decay.
  double bump_unit() const { return var_inc_; }
  bool saved_phase(std::uint32_t var) const { return polarity_[var - 1]; }
  void set_saved_phase(std::uint32_t var, bool phase) { polarity_[var - 1] = phase; }

  // Clause database.
  Clause clause(ClauseRef ref) const;
  std::size_t num_original_clauses() const { return num_original_; }
  std::size_t num_learned_clauses() const;
  SolverSnapshot snapshot() const;
  /// Order-sensitive hash over every live clause (original and learned).
  std::uint64_t clause_db_hash() const;
  /// Debug sweep: true iff no live clause is falsified by the current trail.
  bool no_clause_falsified() const;

  const Stats& stats() const { return stats_; }
  void record_grover_call(std::uint64_t iterations);
  std::mt19937_64& rng() { return rng_; }
  const SolverConfig& config() const { return config_; }

 private:
  using Lit = std::uint32_t;  // 2*(var-1) + (negative ? 1 : 0)

  struct StoredClause {
    std::vector<Lit> lits;
    double activity = 0.0;
    bool learned = false;
    bool deleted = false;
  };
  struct Watcher {
    ClauseRef cref;
    Lit blocker;
  };

  static Lit encode(const Literal& l) { return 2 * (l.var - 1) + (l.positive ? 0 : 1); }
  static Literal decode(Lit l) { return Literal(l / 2 + 1, (l & 1) == 0); }
  static std::uint32_t var_index(Lit l) { return l >> 1; }
  LBool lit_value(Lit l) const;

  void enqueue(Lit l, ClauseRef reason);
  ClauseRef add_stored(std::vector<Lit> lits, bool learned);
  void attach(ClauseRef ref);
  bool locked(ClauseRef ref) const;
  void bump_clause(ClauseRef ref);
  void rescale_vars();
  void reduce_db();
  bool restart_due() const;

  // Indexed binary max-heap over variable indices (0-based), ordered by
  // activity with ties going to the lower index.
  bool heap_before(std::uint32_t a, std::uint32_t b) const;
  void heap_insert(std::uint32_t v);
  std::uint32_t heap_pop();
  void heap_sift_up(std::size_t pos);
  void heap_sift_down(std::size_t pos);
  bool in_heap(std::uint32_t v) const { return heap_pos_[v] >= 0; }

  SolverConfig config_;
  Cnf original_;
  std::uint32_t num_vars_ = 0;
  std::size_t num_original_ = 0;
  bool ok_ = true;
  ClauseRef load_conflict_ = kNoClause;

  std::vector<StoredClause> clauses_;
  std::vector<ClauseRef> learned_;
  std::vector<std::vector<Watcher>> watches_;

  std::vector<LBool> assigns_;
  std::vector<int> level_;
  std::vector<ClauseRef> reason_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  std::vector<bool> polarity_;
  std::vector<std::uint32_t> heap_;
  std::vector<long> heap_pos_;
  std::vector<char> seen_;

  std::uint64_t conflicts_since_restart_ = 0;
  Stats stats_;
  std::mt19937_64 rng_;
};

/// Baseline CDCL run.
SolveResult solve(const Cnf& cnf, const SolverConfig& config = {});

}  // namespace qgcl
