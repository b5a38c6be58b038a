#include "qgcl/cdcl.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace qgcl {

namespace {
constexpr double kActivityLimit = 1e100;
constexpr double kActivityRescale = 1e-100;
}  // namespace

void SolverConfig::validate() const {
  if (!(var_decay > 0.0 && var_decay < 1.0)) throw std::invalid_argument("var_decay must lie in (0,1)");
  if (!(clause_activity_decay > 0.0 && clause_activity_decay < 1.0))
    throw std::invalid_argument("clause_activity_decay must lie in (0,1)");
  if (restart_base < 1) throw std::invalid_argument("restart_base must be >= 1");
  if (initial_activity_jitter < 0.0) throw std::invalid_argument("initial_activity_jitter must be >= 0");
  if (!(learned_cap_factor > 0.0)) throw std::invalid_argument("learned_cap_factor must be > 0");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "SAT";
    case SolveStatus::Unsat: return "UNSAT";
    case SolveStatus::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::uint64_t luby(std::uint64_t i) {
  if (i == 0) throw std::invalid_argument("luby index is 1-based");
  std::uint64_t x = i - 1;
  std::uint64_t size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::uint64_t{1} << seq;
}

bool check_model(const Cnf& cnf, const Assignment& model) { return eval_assignment(cnf, model).satisfied; }

Solver::Solver(const Cnf& cnf, SolverConfig config) : config_(config), rng_(config.random_seed) {
  config_.validate();
  num_vars_ = cnf.num_vars;
  watches_.resize(2 * static_cast<std::size_t>(num_vars_));
  assigns_.assign(num_vars_, LBool::Undef);
  level_.assign(num_vars_, 0);
  reason_.assign(num_vars_, kNoClause);
  polarity_.assign(num_vars_, config_.initial_phase);
  seen_.assign(num_vars_, 0);
  activity_.assign(num_vars_, 0.0);
  heap_pos_.assign(num_vars_, -1);
  if (config_.initial_activity_jitter > 0.0) {
    std::uniform_real_distribution<double> jitter(0.0, config_.initial_activity_jitter);
    for (double& a : activity_) a = jitter(rng_);
  }
  for (std::uint32_t v = 0; v < num_vars_; ++v) heap_insert(v);

  for (const Clause& c : cnf.clauses) {
    if (c.is_tautology()) continue;
    std::vector<Lit> lits;
    lits.reserve(c.size());
    for (const Literal& l : c) {
      if (l.var > num_vars_) throw std::invalid_argument("clause variable exceeds num_vars");
      lits.push_back(encode(l));
    }
    ClauseRef ref = add_stored(std::move(lits), false);
    ++num_original_;
    if (!ok_) continue;
    const auto& stored = clauses_[ref].lits;
    if (stored.empty()) {
      ok_ = false;
      load_conflict_ = ref;
    } else if (stored.size() == 1) {
      LBool v = lit_value(stored[0]);
      if (v == LBool::False) {
        ok_ = false;
        load_conflict_ = ref;
      } else if (v == LBool::Undef) {
        enqueue(stored[0], kNoClause);
      }
    } else {
      attach(ref);
    }
  }
  original_ = cnf;
}

LBool Solver::lit_value(Lit l) const {
  LBool v = assigns_[var_index(l)];
  if (v == LBool::Undef) return v;
  return to_lbool((v == LBool::True) == ((l & 1) == 0));
}

LBool Solver::value(const Literal& l) const { return lit_value(encode(l)); }

std::vector<Literal> Solver::trail() const {
  std::vector<Literal> out;
  out.reserve(trail_.size());
  for (Lit l : trail_) out.push_back(decode(l));
  return out;
}

void Solver::enqueue(Lit l, ClauseRef reason) {
  std::uint32_t v = var_index(l);
  assigns_[v] = to_lbool((l & 1) == 0);
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

ClauseRef Solver::add_stored(std::vector<Lit> lits, bool learned) {
  auto ref = static_cast<ClauseRef>(clauses_.size());
  clauses_.push_back(StoredClause{std::move(lits), 0.0, learned, false});
  if (learned) learned_.push_back(ref);
  return ref;
}

void Solver::attach(ClauseRef ref) {
  const auto& c = clauses_[ref].lits;
  watches_[c[0]].push_back({ref, c[1]});
  watches_[c[1]].push_back({ref, c[0]});
}

std::optional<ClauseRef> Solver::propagate() {
  if (!ok_) {
    if (load_conflict_ != kNoClause) return load_conflict_;
  }
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    ++stats_.propagations;
    Lit false_lit = p ^ 1;
    auto& ws = watches_[false_lit];
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i];
      StoredClause& sc = clauses_[w.cref];
      if (sc.deleted) {
        ++i;
        continue;
      }
      if (lit_value(w.blocker) == LBool::True) {
        ws[j++] = ws[i++];
        continue;
      }
      auto& c = sc.lits;
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      Lit first = c[0];
      if (first != w.blocker && lit_value(first) == LBool::True) {
        ws[j++] = Watcher{w.cref, first};
        ++i;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (lit_value(c[k]) != LBool::False) {
          std::swap(c[1], c[k]);
          watches_[c[1]].push_back(Watcher{w.cref, first});
          moved = true;
          break;
        }
      }
      ++i;
      if (moved) continue;
      ws[j++] = Watcher{w.cref, first};
      if (lit_value(first) == LBool::False) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return w.cref;
      }
      enqueue(first, w.cref);
    }
    ws.resize(j);
  }
  return std::nullopt;
}

ConflictAnalysis Solver::analyze_conflict(ClauseRef conflict) {
  ConflictAnalysis out;
  if (decision_level() == 0) {
    out.unsat = true;
    return out;
  }
  std::vector<Lit> learnt(1, 0);
  int path_count = 0;
  Lit p = 0;
  bool have_p = false;
  std::size_t index = trail_.size();
  ClauseRef confl = conflict;

  do {
    StoredClause& c = clauses_[confl];
    if (c.learned) bump_clause(confl);
    for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
      Lit q = c.lits[k];
      std::uint32_t v = var_index(q);
      if (seen_[v] || level_[v] == 0) continue;
      bump_activity(v + 1, var_inc_);
      seen_[v] = 1;
      if (level_[v] >= decision_level())
        ++path_count;
      else
        learnt.push_back(q);
    }
    while (!seen_[var_index(trail_[--index])]) {
    }
    p = trail_[index];
    have_p = true;
    confl = reason_[var_index(p)];
    seen_[var_index(p)] = 0;
    --path_count;
  } while (path_count > 0);
  learnt[0] = p ^ 1;

  for (std::size_t k = 1; k < learnt.size(); ++k) seen_[var_index(learnt[k])] = 0;

  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t k = 2; k < learnt.size(); ++k)
      if (level_[var_index(learnt[k])] > level_[var_index(learnt[max_i])]) max_i = k;
    std::swap(learnt[1], learnt[max_i]);
    out.backjump_level = level_[var_index(learnt[1])];
  }
  std::vector<Literal> lits;
  lits.reserve(learnt.size());
  for (Lit l : learnt) lits.push_back(decode(l));
  out.learned = Clause(std::move(lits));
  return out;
}

void Solver::learn_and_backjump(const ConflictAnalysis& analysis) {
  backtrack(analysis.backjump_level);
  std::vector<Lit> lits;
  for (const Literal& l : analysis.learned) lits.push_back(encode(l));
  ClauseRef ref = add_stored(lits, true);
  if (lits.size() == 1) {
    enqueue(lits[0], kNoClause);
  } else {
    attach(ref);
    bump_clause(ref);
    enqueue(lits[0], ref);
  }
  var_inc_ /= config_.var_decay;
  cla_inc_ /= config_.clause_activity_decay;
}

void Solver::bump_clause(ClauseRef ref) {
  clauses_[ref].activity += cla_inc_;
  if (clauses_[ref].activity > 1e20) {
    for (ClauseRef r : learned_) clauses_[r].activity *= 1e-20;
    cla_inc_ *= 1e-20;
  }
}

void Solver::set_activity(std::uint32_t var, double value) {
  if (value < 0.0) throw std::invalid_argument("activity must be nonnegative");
  std::uint32_t v = var - 1;
  activity_[v] = value;
  if (in_heap(v)) {
    heap_sift_up(static_cast<std::size_t>(heap_pos_[v]));
    heap_sift_down(static_cast<std::size_t>(heap_pos_[v]));
  }
}

void Solver::bump_activity(std::uint32_t var, double amount) {
  std::uint32_t v = var - 1;
  activity_[v] += amount;
  if (activity_[v] > kActivityLimit) rescale_vars();
  if (in_heap(v)) heap_sift_up(static_cast<std::size_t>(heap_pos_[v]));
}

void Solver::rescale_vars() {
  for (double& a : activity_) a *= kActivityRescale;
  var_inc_ *= kActivityRescale;
}

std::optional<Literal> Solver::pick_branch_literal() {
  while (!heap_.empty()) {
    std::uint32_t v = heap_[0];
    if (assigns_[v] == LBool::Undef) return Literal(v + 1, polarity_[v]);
    heap_pop();
  }
  return std::nullopt;
}

void Solver::decide(Literal lit) {
  if (value(lit.var) != LBool::Undef) throw std::logic_error("decision on an assigned variable");
  trail_lim_.push_back(trail_.size());
  enqueue(encode(lit), kNoClause);
}

void Solver::backtrack(int level) {
  if (decision_level() <= level) return;
  for (std::size_t c = trail_.size(); c-- > trail_lim_[static_cast<std::size_t>(level)];) {
    std::uint32_t v = var_index(trail_[c]);
    assigns_[v] = LBool::Undef;
    reason_[v] = kNoClause;
    polarity_[v] = (trail_[c] & 1) == 0;
    if (!in_heap(v)) heap_insert(v);
  }
  trail_.resize(trail_lim_[static_cast<std::size_t>(level)]);
  trail_lim_.resize(static_cast<std::size_t>(level));
  qhead_ = trail_.size();
}

bool Solver::locked(ClauseRef ref) const {
  const auto& c = clauses_[ref].lits;
  if (c.empty()) return false;
  std::uint32_t v = var_index(c[0]);
  return reason_[v] == ref && lit_value(c[0]) == LBool::True;
}

std::size_t Solver::num_learned_clauses() const { return learned_.size(); }

void Solver::reduce_db() {
  std::vector<ClauseRef> order = learned_;
  std::stable_sort(order.begin(), order.end(),
                   [&](ClauseRef a, ClauseRef b) { return clauses_[a].activity < clauses_[b].activity; });
  std::size_t target = order.size() / 2;
  std::size_t removed = 0;
  for (ClauseRef r : order) {
    if (removed >= target) break;
    if (locked(r)) continue;
    clauses_[r].deleted = true;
    clauses_[r].lits.clear();
    clauses_[r].lits.shrink_to_fit();
    ++removed;
  }
  std::erase_if(learned_, [&](ClauseRef r) { return clauses_[r].deleted; });
}

bool Solver::restart_due() const {
  return conflicts_since_restart_ >= config_.restart_base * luby(stats_.restarts + 1);
}

Clause Solver::clause(ClauseRef ref) const {
  std::vector<Literal> lits;
  for (Lit l : clauses_[ref].lits) lits.push_back(decode(l));
  return Clause(std::move(lits));
}

SolverSnapshot Solver::snapshot() const {
  SolverSnapshot s;
  s.num_vars = num_vars_;
  s.var_activity = activity_;
  s.values = assigns_;
  for (ClauseRef r = 0; r < clauses_.size(); ++r) {
    const StoredClause& sc = clauses_[r];
    if (sc.deleted) continue;
    if (sc.learned) s.learned_order.push_back(s.clauses.size());
    s.clauses.push_back(clause(r));
    s.clause_activity.push_back(sc.activity);
    s.learned.push_back(sc.learned);
  }
  return s;
}

std::uint64_t Solver::clause_db_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  std::vector<Lit> sorted;
  for (ClauseRef r = 0; r < clauses_.size(); ++r) {
    const StoredClause& sc = clauses_[r];
    mix(r);
    mix(sc.deleted ? 1 : 0);
    mix(sc.learned ? 1 : 0);
    sorted = sc.lits;
    std::sort(sorted.begin(), sorted.end());
    for (Lit l : sorted) mix(l);
    mix(0xffffffffULL);
  }
  return h;
}

bool Solver::no_clause_falsified() const {
  for (const StoredClause& sc : clauses_) {
    if (sc.deleted || sc.lits.empty()) continue;
    if (std::all_of(sc.lits.begin(), sc.lits.end(), [&](Lit l) { return lit_value(l) == LBool::False; }))
      return false;
  }
  return true;
}

void Solver::record_grover_call(std::uint64_t iterations) {
  ++stats_.grover_calls;
  stats_.grover_iterations += iterations;
}

SolveResult Solver::solve(SearchObserver* observer) {
  auto start = std::chrono::steady_clock::now();
  SolveResult result;
  auto finish = [&](SolveStatus status) {
    result.status = status;
    if (status == SolveStatus::Sat) {
      result.model.resize(num_vars_);
      for (std::uint32_t v = 0; v < num_vars_; ++v) result.model[v] = assigns_[v] == LBool::True;
      if (!check_model(original_, result.model)) throw std::logic_error("solver produced an invalid model");
    }
    stats_.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.stats = stats_;
    return result;
  };

  if (!ok_) return finish(SolveStatus::Unsat);
  const auto learned_cap =
      std::max<std::size_t>(1, static_cast<std::size_t>(config_.learned_cap_factor * static_cast<double>(num_original_)));
  std::size_t next_reduce = learned_cap;

  for (;;) {
    std::optional<ClauseRef> confl = propagate();
    if (confl) {
      ++stats_.conflicts;
      ++conflicts_since_restart_;
      if (decision_level() == 0) {
        ok_ = false;
        return finish(SolveStatus::Unsat);
      }
      learn_and_backjump(analyze_conflict(*confl));
      if (config_.conflict_budget != 0 && stats_.conflicts >= config_.conflict_budget) {
        backtrack(0);
        return finish(SolveStatus::Unknown);
      }
      if (restart_due()) {
        backtrack(0);
        ++stats_.restarts;
        conflicts_since_restart_ = 0;
      }
      if (observer) observer->on_conflict_handled(*this);
      continue;
    }
    if (all_assigned()) return finish(SolveStatus::Sat);
    if (observer) observer->on_fixpoint(*this);
    if (learned_.size() >= next_reduce) {
      reduce_db();
      next_reduce = std::max(learned_cap, learned_.size() + learned_cap / 2 + 1);
    }
    std::optional<Literal> next = pick_branch_literal();
    if (!next) return finish(SolveStatus::Sat);
    ++stats_.decisions;
    decide(*next);
  }
}

bool Solver::heap_before(std::uint32_t a, std::uint32_t b) const {
  return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
}

void Solver::heap_insert(std::uint32_t v) {
  heap_pos_[v] = static_cast<long>(heap_.size());
  heap_.push_back(v);
  heap_sift_up(heap_.size() - 1);
}

std::uint32_t Solver::heap_pop() {
  std::uint32_t top = heap_[0];
  heap_[0] = heap_.back();
  heap_pos_[heap_[0]] = 0;
  heap_pos_[top] = -1;
  heap_.pop_back();
  if (!heap_.empty()) heap_sift_down(0);
  return top;
}

void Solver::heap_sift_up(std::size_t pos) {
  std::uint32_t v = heap_[pos];
  while (pos > 0) {
    std::size_t parent = (pos - 1) / 2;
    if (!heap_before(v, heap_[parent])) break;
    heap_[pos] = heap_[parent];
    heap_pos_[heap_[pos]] = static_cast<long>(pos);
    pos = parent;
  }
  heap_[pos] = v;
  heap_pos_[v] = static_cast<long>(pos);
}

void Solver::heap_sift_down(std::size_t pos) {
  std::uint32_t v = heap_[pos];
  for (;;) {
    std::size_t child = 2 * pos + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_before(heap_[child + 1], heap_[child])) ++child;
    if (!heap_before(heap_[child], v)) break;
    heap_[pos] = heap_[child];
    heap_pos_[heap_[pos]] = static_cast<long>(pos);
    pos = child;
  }
  heap_[pos] = v;
  heap_pos_[v] = static_cast<long>(pos);
}

SolveResult solve(const Cnf& cnf, const SolverConfig& config) {
  Solver solver(cnf, config);
  return solver.solve();
}

}  // namespace qgcl
