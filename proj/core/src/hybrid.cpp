#include "qgcl/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qgcl {

void HybridConfig::validate() const {
  solver.validate();
  extraction.validate();
  grover.validate();
  if (grover_interval < 1) throw std::invalid_argument("grover_interval must be >= 1");
  if (!(eta0 >= 0.0 && eta0 <= 1.0)) throw std::invalid_argument("eta0 must lie in [0,1]");
  if (!(polarity_q_threshold >= 0.0 && polarity_q_threshold <= 1.0))
    throw std::invalid_argument("polarity_q_threshold must lie in [0,1]");
}

bool should_call_grover(std::uint64_t conflicts, const CallSchedule& schedule, const HybridConfig& config) {
  if (schedule.calls_used >= config.max_grover_calls) return false;
  if (conflicts == 0 || conflicts % config.grover_interval != 0) return false;
  return conflicts > schedule.last_call_conflicts;
}

double hint_strength(double eta0, double q) {
  if (!(eta0 >= 0.0 && eta0 <= 1.0 && q >= 0.0 && q <= 1.0)) throw std::invalid_argument("eta0 and q must lie in [0,1]");
  return std::clamp(eta0 * (1.0 - q), 0.0, 1.0);
}

double mix_preferences(double pi, double pi_hat, double eta) {
  for (double x : {pi, pi_hat, eta})
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("preference arguments must lie in [0,1]");
  return (1.0 - eta) * pi + eta * pi_hat;
}

HintReport apply_hints(Solver& solver, const SubFormula& sub, const Assignment& beta_q, double q,
                       const HybridConfig& config) {
  if (beta_q.size() != sub.num_vars()) throw std::invalid_argument("beta_q must cover every dense variable");
  HintReport report;
  const std::vector<std::uint32_t> counts = sub.occurrence_counts();
  const double unit = solver.bump_unit();
  const double eta = hint_strength(config.eta0, q);
  const bool write_polarity = q <= config.polarity_q_threshold;

  for (std::uint32_t i = 0; i < sub.num_vars(); ++i) {
    const std::uint32_t var = sub.var_map[i];
    solver.bump_activity(var, unit * counts[i] * (1.0 + (1.0 - q)));
    ++report.activity_bumps;
    if (!write_polarity || counts[i] < 2) continue;
    const double current = solver.saved_phase(var) ? 1.0 : 0.0;
    const double hinted = beta_q[i] ? 1.0 : 0.0;
    const double mixed = mix_preferences(current, hinted, eta);
    solver.set_saved_phase(var, mixed > 0.5 || (mixed == 0.5 && beta_q[i]));
    ++report.polarity_writes;
    report.polarity_applied = true;
  }
  return report;
}

namespace {

class HybridController final : public SearchObserver {
 public:
  HybridController(const HybridConfig& config, HybridResult& out) : config_(config), out_(out) {}

  void on_conflict_handled(Solver& solver) override {
    const std::uint64_t conflicts = solver.stats().conflicts;
    if (!should_call_grover(conflicts, schedule_, config_)) return;
    // The call itself waits for the next propagation fixpoint so that the
    // extracted clauses are simplified against a conflict-free trail.
    schedule_.last_call_conflicts = conflicts;
    pending_ = true;
  }

  void on_fixpoint(Solver& solver) override {
    if (!pending_) return;
    pending_ = false;
    SolverSnapshot snap = solver.snapshot();
    ExtractionResult ext = extract_subformula(snap, config_.extraction, solver.rng());
    if (!ext.sub) {
      ++out_.skipped_calls;
      ++out_.skip_reasons[ext.status];
      return;
    }
    const SubFormula& sub = *ext.sub;
    GroverOutcome outcome = bbht_search(sub.cnf, config_.grover, solver.rng());
    ++schedule_.calls_used;

    const std::uint64_t before = solver.clause_db_hash();
    HintReport hints = apply_hints(solver, sub, outcome.assignment(sub.num_vars()), outcome.q.value(), config_);
    if (solver.clause_db_hash() != before) ++out_.feedback_hash_mismatches;
    solver.record_grover_call(outcome.total_iterations);

    CallRecord rec;
    rec.call_idx = schedule_.calls_used;
    rec.conflict_index = schedule_.last_call_conflicts;
    rec.n_sub = sub.num_vars();
    rec.m_sub = static_cast<std::uint32_t>(sub.num_clauses());
    rec.q = outcome.q;
    rec.attempts = outcome.attempts_used;
    rec.iterations = outcome.total_iterations;
    rec.polarity_applied = hints.polarity_applied;
    out_.calls.push_back(rec);
  }

 private:
  const HybridConfig& config_;
  HybridResult& out_;
  CallSchedule schedule_;
  bool pending_ = false;
};

}  // namespace

HybridResult solve_hybrid(const Cnf& cnf, const HybridConfig& config) {
  config.validate();
  HybridResult out;
  Solver solver(cnf, config.solver);
  HybridController controller(config, out);
  out.result = solver.solve(&controller);
  return out;
}

double grover_call_cost(double gamma, double c_iter, std::uint32_t n, std::uint64_t num_solutions) {
  const double space = std::ldexp(1.0, static_cast<int>(n));
  return gamma * c_iter * std::sqrt(space / static_cast<double>(std::max<std::uint64_t>(num_solutions, 1)));
}

double expected_conflict_reduction(const CallCostParams& call) {
  return call.conflict_density * (success_probability(call.mu, call.iterations) - call.mu);
}

double estimate_hybrid_runtime(const CostModelParams& params) {
  auto nonneg = [](double x) { return x >= 0.0; };
  if (!nonneg(params.t_cdcl) || !nonneg(params.gamma) || !nonneg(params.conflict_cost))
    throw std::invalid_argument("cost model parameters must be nonnegative");
  double call_cost = 0.0;
  double reduction = 0.0;
  for (const CallCostParams& c : params.calls) {
    if (!nonneg(c.extraction_cost) || !nonneg(c.feedback_cost) || !nonneg(c.c_iter) ||
        !nonneg(c.conflict_density) || !(c.mu >= 0.0 && c.mu <= 1.0))
      throw std::invalid_argument("cost model parameters must be nonnegative");
    call_cost += c.extraction_cost + grover_call_cost(params.gamma, c.c_iter, c.n, c.num_solutions) + c.feedback_cost;
    reduction += expected_conflict_reduction(c);
  }
  return params.t_cdcl + call_cost - params.conflict_cost * reduction;
}

double crossover_size(std::uint64_t m) {
  if (m < 1) throw std::invalid_argument("crossover_size needs m >= 1");
  return 2.0 * std::log2(static_cast<double>(m));
}

}  // namespace qgcl
