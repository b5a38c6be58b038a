#include "qgcl/extract.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace qgcl {

std::string_view to_cli_name(ExtractionStrategy s) {
  switch (s) {
    case ExtractionStrategy::ActivityBfs: return "abfs";
    case ExtractionStrategy::ActivityGreedy: return "ag";
    case ExtractionStrategy::RandomSample: return "rand";
    case ExtractionStrategy::VariableFrontier: return "vf";
  }
  return "abfs";
}

ExtractionStrategy parse_strategy(std::string_view name) {
  if (name == "abfs") return ExtractionStrategy::ActivityBfs;
  if (name == "ag") return ExtractionStrategy::ActivityGreedy;
  if (name == "rand") return ExtractionStrategy::RandomSample;
  if (name == "vf") return ExtractionStrategy::VariableFrontier;
  throw std::invalid_argument("unknown extraction strategy '" + std::string(name) + "' (expected abfs, ag, rand, vf)");
}

const char* to_string(ExtractionStatus s) {
  switch (s) {
    case ExtractionStatus::Extracted: return "extracted";
    case ExtractionStatus::NothingUnsatisfied: return "nothing_unsatisfied";
    case ExtractionStatus::Trivial: return "trivial";
    case ExtractionStatus::OverBudget: return "over_budget";
    case ExtractionStatus::FalsifiedClause: return "falsified_clause";
  }
  return "?";
}

void ExtractionConfig::validate() const {
  if (budget < 3) throw std::invalid_argument("extraction budget must be >= 3");
  if (max_seed_candidates < 1) throw std::invalid_argument("max_seed_candidates must be >= 1");
}

std::vector<std::uint32_t> SubFormula::occurrence_counts() const {
  std::vector<std::uint32_t> counts(num_vars(), 0);
  for (const Clause& c : cnf.clauses)
    for (const Literal& l : c) ++counts[l.var - 1];
  return counts;
}

namespace {

enum class Reduced { Satisfied, Empty, Kept };

LBool literal_value(const Literal& l, std::span<const LBool> values) {
  LBool v = values[l.var - 1];
  if (v == LBool::Undef) return v;
  return to_lbool((v == LBool::True) == l.positive);
}

Reduced reduce_clause(const Clause& c, std::span<const LBool> values, std::vector<Literal>& out) {
  out.clear();
  for (const Literal& l : c) {
    LBool v = literal_value(l, values);
    if (v == LBool::True) return Reduced::Satisfied;
    if (v == LBool::Undef) out.push_back(l);
  }
  return out.empty() ? Reduced::Empty : Reduced::Kept;
}

bool clause_open(const Clause& c, std::span<const LBool> values) {
  return std::none_of(c.begin(), c.end(), [&](const Literal& l) { return literal_value(l, values) == LBool::True; });
}

std::vector<std::vector<std::size_t>> occurrence_lists(const SolverSnapshot& snap) {
  std::vector<std::vector<std::size_t>> occ(snap.num_vars);
  for (std::size_t i = 0; i < snap.clauses.size(); ++i)
    for (const Literal& l : snap.clauses[i]) occ[l.var - 1].push_back(i);
  return occ;
}

std::vector<std::size_t> bfs_order(const SolverSnapshot& snap, std::size_t seed) {
  auto occ = occurrence_lists(snap);
  std::vector<char> visited(snap.clauses.size(), 0);
  std::vector<std::size_t> order;
  std::deque<std::size_t> queue{seed};
  visited[seed] = 1;
  std::vector<std::size_t> fresh;
  while (!queue.empty()) {
    std::size_t c = queue.front();
    queue.pop_front();
    order.push_back(c);
    fresh.clear();
    for (const Literal& l : snap.clauses[c])
      for (std::size_t nb : occ[l.var - 1])
        if (!visited[nb]) {
          visited[nb] = 1;
          fresh.push_back(nb);
        }
    std::sort(fresh.begin(), fresh.end());
    queue.insert(queue.end(), fresh.begin(), fresh.end());
  }
  return order;
}

std::vector<std::size_t> open_clauses(const SolverSnapshot& snap) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < snap.clauses.size(); ++i)
    if (clause_open(snap.clauses[i], snap.values)) out.push_back(i);
  return out;
}

std::vector<std::size_t> greedy_order(const SolverSnapshot& snap) {
  auto order = open_clauses(snap);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return snap.clause_activity[a] > snap.clause_activity[b]; });
  return order;
}

std::vector<std::size_t> random_order(const SolverSnapshot& snap, std::mt19937_64& rng) {
  auto order = open_clauses(snap);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }
  return order;
}

std::vector<std::size_t> frontier_order(const SolverSnapshot& snap) {
  auto occ = occurrence_lists(snap);
  std::vector<std::uint32_t> vars;
  for (std::uint32_t v = 0; v < snap.num_vars; ++v)
    if (snap.values[v] == LBool::Undef) vars.push_back(v);
  std::stable_sort(vars.begin(), vars.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return snap.var_activity[a] > snap.var_activity[b]; });
  std::vector<char> queued(snap.clauses.size(), 0);
  std::vector<std::size_t> order;
  std::vector<std::size_t> touching;
  for (std::uint32_t v : vars) {
    touching.clear();
    for (std::size_t c : occ[v])
      if (!queued[c] && clause_open(snap.clauses[c], snap.values)) touching.push_back(c);
    std::stable_sort(touching.begin(), touching.end(), [&](std::size_t a, std::size_t b) {
      return snap.clause_activity[a] > snap.clause_activity[b];
    });
    for (std::size_t c : touching) {
      queued[c] = 1;
      order.push_back(c);
    }
  }
  return order;
}

// Walks the candidate order, keeping each simplified clause while the running
// n_sub + m_sub stays within budget. Stops at the first clause that would not fit.
ExtractionResult collect(const SolverSnapshot& snap, std::span<const std::size_t> order, std::size_t budget) {
  ExtractionResult result;
  std::vector<Clause> kept;
  std::size_t first_kept = 0;
  std::set<std::uint32_t> vars;
  std::vector<Literal> lits;
  bool any_open = false;

  for (std::size_t idx : order) {
    Reduced r = reduce_clause(snap.clauses[idx], snap.values, lits);
    if (r == Reduced::Satisfied) continue;
    if (r == Reduced::Empty) {
      result.status = ExtractionStatus::FalsifiedClause;
      return result;
    }
    any_open = true;
    Clause reduced(lits);
    if (std::find(kept.begin(), kept.end(), reduced) != kept.end()) continue;
    std::size_t new_vars = 0;
    for (const Literal& l : reduced) new_vars += vars.count(l.var) == 0 ? 1 : 0;
    if (vars.size() + new_vars + kept.size() + 1 > budget) break;
    if (kept.empty()) first_kept = idx;
    for (const Literal& l : reduced) vars.insert(l.var);
    kept.push_back(std::move(reduced));
  }

  if (kept.empty()) {
    result.status = any_open ? ExtractionStatus::OverBudget : ExtractionStatus::NothingUnsatisfied;
    return result;
  }
  bool all_unit = std::all_of(kept.begin(), kept.end(), [](const Clause& c) { return c.size() == 1; });
  if (vars.size() < 2 || all_unit) {
    result.status = ExtractionStatus::Trivial;
    return result;
  }

  SubFormula sub;
  sub.seed_clause = first_kept;
  sub.var_map.assign(vars.begin(), vars.end());
  std::map<std::uint32_t, std::uint32_t> dense;
  for (std::uint32_t i = 0; i < sub.var_map.size(); ++i) dense[sub.var_map[i]] = i + 1;
  sub.cnf.num_vars = static_cast<std::uint32_t>(sub.var_map.size());
  for (const Clause& c : kept) {
    std::vector<Literal> mapped;
    for (const Literal& l : c) mapped.emplace_back(dense.at(l.var), l.positive);
    sub.cnf.clauses.emplace_back(std::move(mapped));
  }
  result.status = ExtractionStatus::Extracted;
  result.sub = std::move(sub);
  return result;
}

}  // namespace

std::optional<std::vector<Clause>> simplify_under_trail(std::span<const Clause> clauses,
                                                        std::span<const LBool> values) {
  std::vector<Clause> out;
  std::vector<Literal> lits;
  for (const Clause& c : clauses) {
    Reduced r = reduce_clause(c, values, lits);
    if (r == Reduced::Empty) return std::nullopt;
    if (r == Reduced::Kept) out.emplace_back(lits);
  }
  return out;
}

std::optional<std::size_t> select_seed(const SolverSnapshot& snap, std::size_t max_seed_candidates) {
  std::optional<std::size_t> best;
  std::size_t considered = 0;
  for (auto it = snap.learned_order.rbegin(); it != snap.learned_order.rend() && considered < max_seed_candidates;
       ++it, ++considered) {
    std::size_t c = *it;
    if (!clause_open(snap.clauses[c], snap.values)) continue;
    if (!best || snap.clause_activity[c] > snap.clause_activity[*best]) best = c;
  }
  if (best) return best;

  // Fallback: the open clause holding the most active unassigned variable.
  double best_score = -1.0;
  for (std::size_t c = 0; c < snap.clauses.size(); ++c) {
    const Clause& cl = snap.clauses[c];
    if (!clause_open(cl, snap.values)) continue;
    double score = -0.5;
    for (const Literal& l : cl)
      if (snap.values[l.var - 1] == LBool::Undef) score = std::max(score, snap.var_activity[l.var - 1]);
    if (!best || score > best_score) {
      best = c;
      best_score = score;
    }
  }
  return best;
}

ExtractionResult extract_subformula(const SolverSnapshot& snap, const ExtractionConfig& config, std::mt19937_64& rng,
                                    std::size_t seed) {
  config.validate();
  if (seed >= snap.clauses.size()) throw std::out_of_range("seed clause index out of range");
  std::vector<std::size_t> order;
  switch (config.strategy) {
    case ExtractionStrategy::ActivityBfs: order = bfs_order(snap, seed); break;
    case ExtractionStrategy::ActivityGreedy: order = greedy_order(snap); break;
    case ExtractionStrategy::RandomSample: order = random_order(snap, rng); break;
    case ExtractionStrategy::VariableFrontier: order = frontier_order(snap); break;
  }
  return collect(snap, order, config.budget);
}

ExtractionResult extract_subformula(const SolverSnapshot& snap, const ExtractionConfig& config,
                                    std::mt19937_64& rng) {
  config.validate();
  std::optional<std::size_t> seed = select_seed(snap, config.max_seed_candidates);
  if (!seed) return ExtractionResult{ExtractionStatus::NothingUnsatisfied, std::nullopt};
  return extract_subformula(snap, config, rng, *seed);
}

}  // namespace qgcl
