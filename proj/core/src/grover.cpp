#include "qgcl/grover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace qgcl {

void GroverConfig::validate() const {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (!(growth_factor > 1.0)) throw std::invalid_argument("growth_factor must be > 1");
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
  if (top_k < 1) throw std::invalid_argument("top_k must be >= 1");
  if (!(noise_epsilon >= 0.0 && noise_epsilon <= 1.0)) throw std::invalid_argument("noise_epsilon must lie in [0,1]");
  if (max_sim_vars > 30) throw std::invalid_argument("max_sim_vars above 30 is not supported");
}

std::string bitstring(std::uint64_t basis, std::uint32_t n) {
  std::string s(n, '0');
  for (std::uint32_t i = 0; i < n; ++i)
    if ((basis >> i) & 1U) s[i] = '1';
  return s;
}

Assignment basis_to_assignment(std::uint64_t basis, std::uint32_t n) {
  Assignment a(n);
  for (std::uint32_t i = 0; i < n; ++i) a[i] = ((basis >> i) & 1U) != 0;
  return a;
}

std::uint64_t assignment_to_basis(const Assignment& a) {
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i]) x |= std::uint64_t{1} << i;
  return x;
}

double success_probability(double mu, std::uint64_t r) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("mu must lie in [0,1]");
  if (r == 0) return mu;
  double theta = std::asin(std::sqrt(mu));
  double s = std::sin(static_cast<double>(2 * r + 1) * theta);
  return s * s;
}

std::vector<bool> build_phase_marks(const Cnf& sub, std::uint32_t max_vars) {
  if (sub.num_vars > max_vars)
    throw std::length_error("subformula has " + std::to_string(sub.num_vars) + " variables, simulation limit is " +
                            std::to_string(max_vars));
  const std::uint64_t n_states = std::uint64_t{1} << sub.num_vars;
  std::vector<bool> marks(n_states, true);
  // Clause-major sweep: a basis state violates clause c iff every literal is false.
  for (const Clause& c : sub.clauses) {
    std::uint64_t care = 0;
    std::uint64_t falsifying = 0;
    for (const Literal& l : c) {
      std::uint64_t bit = std::uint64_t{1} << (l.var - 1);
      care |= bit;
      if (!l.positive) falsifying |= bit;
    }
    for (std::uint64_t x = 0; x < n_states; ++x)
      if ((x & care) == falsifying) marks[x] = false;
  }
  return marks;
}

std::vector<double> amplify(const std::vector<bool>& marks, std::uint64_t r) {
  const std::size_t n_states = marks.size();
  std::vector<double> amps(n_states, 1.0 / std::sqrt(static_cast<double>(n_states)));
  for (std::uint64_t it = 0; it < r; ++it) {
    for (std::size_t x = 0; x < n_states; ++x)
      if (marks[x]) amps[x] = -amps[x];
    double mean = std::accumulate(amps.begin(), amps.end(), 0.0) / static_cast<double>(n_states);
    for (double& a : amps) a = 2.0 * mean - a;
  }
  return amps;
}

CircuitDescription build_gadget_circuit(const Cnf& sub, std::uint32_t max_width) {
  CircuitDescription circ;
  circ.num_vars = sub.num_vars;
  circ.num_clauses = static_cast<std::uint32_t>(sub.clauses.size());
  if (circ.width() > max_width)
    throw std::length_error("oracle width " + std::to_string(circ.width()) + " exceeds limit " +
                            std::to_string(max_width));
  for (std::uint32_t v = 0; v < circ.num_vars; ++v) circ.preparation.push_back({GateKind::Hadamard, v, {}});

  std::vector<Gate> compute;
  for (std::uint32_t j = 0; j < circ.num_clauses; ++j) {
    const Clause& c = sub.clauses[j];
    std::vector<Gate> flips;
    std::vector<Control> controls;
    for (const Literal& l : c) {
      std::uint32_t wire = l.var - 1;
      if (l.positive) flips.push_back({GateKind::Not, wire, {}});
      controls.push_back({wire, true});
    }
    compute.insert(compute.end(), flips.begin(), flips.end());
    compute.push_back({GateKind::MultiControlledNot, circ.clause_wire(j), controls});
    compute.insert(compute.end(), flips.begin(), flips.end());
  }
  std::vector<Control> flag_controls;
  for (std::uint32_t j = 0; j < circ.num_clauses; ++j) flag_controls.push_back({circ.clause_wire(j), false});
  compute.push_back({GateKind::MultiControlledNot, circ.flag_wire(), flag_controls});

  circ.oracle = compute;
  circ.phase_index = circ.oracle.size();
  circ.oracle.push_back({GateKind::ControlledPhaseFlip, circ.flag_wire(), {}});
  circ.oracle.insert(circ.oracle.end(), compute.rbegin(), compute.rend());
  return circ;
}

BasisSimulation simulate_circuit(const CircuitDescription& circuit, std::uint64_t x) {
  std::vector<bool> wires(circuit.width(), false);
  for (std::uint32_t v = 0; v < circuit.num_vars; ++v) wires[v] = ((x >> v) & 1U) != 0;
  BasisSimulation out;
  for (const Gate& g : circuit.oracle) {
    switch (g.kind) {
      case GateKind::Hadamard:
        throw std::logic_error("Hadamard inside the oracle does not keep basis states");
      case GateKind::Not:
        wires[g.target] = !wires[g.target];
        break;
      case GateKind::MultiControlledNot: {
        bool fire = std::all_of(g.controls.begin(), g.controls.end(),
                                [&](const Control& c) { return wires[c.wire] == c.on_one; });
        if (fire) wires[g.target] = !wires[g.target];
        break;
      }
      case GateKind::ControlledPhaseFlip:
        if (wires[g.target]) out.phase = -out.phase;
        break;
    }
  }
  for (std::uint32_t w = circuit.num_vars; w < circuit.width(); ++w)
    if (wires[w]) out.ancillas_zero = false;
  return out;
}

Histogram sample_histogram(const std::vector<double>& probabilities, std::uint64_t shots, double noise_epsilon,
                           std::mt19937_64& rng) {
  std::vector<double> weights(probabilities);
  if (noise_epsilon > 0.0) {
    const double uniform = 1.0 / static_cast<double>(weights.size());
    for (double& w : weights) w = (1.0 - noise_epsilon) * w + noise_epsilon * uniform;
  }
  std::discrete_distribution<std::uint64_t> dist(weights.begin(), weights.end());
  Histogram hist;
  for (std::uint64_t s = 0; s < shots; ++s) ++hist[dist(rng)];
  return hist;
}

Histogram grover_run(const Cnf& sub, std::uint64_t r, const GroverConfig& config, std::mt19937_64& rng) {
  config.validate();
  std::vector<bool> marks = build_phase_marks(sub, config.max_sim_vars);
  std::vector<double> amps = amplify(marks, r);
  for (double& a : amps) a *= a;
  return sample_histogram(amps, config.shots, config.noise_epsilon, rng);
}

namespace {

// Bitstring order with x1 as the most significant character.
bool bitstring_less(std::uint64_t a, std::uint64_t b, std::uint32_t n) {
  for (std::uint32_t i = 0; i < n; ++i) {
    bool ba = ((a >> i) & 1U) != 0;
    bool bb = ((b >> i) & 1U) != 0;
    if (ba != bb) return !ba;
  }
  return false;
}

// Strict ordering for "better candidate": fewer violations, more hits, bitstring order.
bool better(const ScoredCandidate& a, const ScoredCandidate& b, std::uint32_t n) {
  if (a.q.violated != b.q.violated) return a.q.violated < b.q.violated;
  if (a.count != b.count) return a.count > b.count;
  return bitstring_less(a.basis, b.basis, n);
}

}  // namespace

ScoredCandidate score_candidates(const Histogram& histogram, const Cnf& sub, std::uint32_t top_k) {
  if (histogram.empty()) throw std::invalid_argument("empty histogram");
  const std::uint32_t n = sub.num_vars;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries(histogram.begin(), histogram.end());
  std::sort(entries.begin(), entries.end(), [n](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return bitstring_less(a.first, b.first, n);
  });
  entries.resize(std::min<std::size_t>(entries.size(), top_k));

  std::optional<ScoredCandidate> best;
  for (const auto& [basis, count] : entries) {
    ScoredCandidate cand{basis, count, eval_assignment(sub, basis_to_assignment(basis, n)).violated};
    if (!best || better(cand, *best, n)) best = cand;
  }
  return *best;
}

std::uint64_t ceil_sqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r < n) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= n) --r;
  return r;
}

GroverOutcome bbht_search(const Cnf& sub, const GroverConfig& config, std::mt19937_64& rng) {
  config.validate();
  std::vector<bool> marks = build_phase_marks(sub, config.max_sim_vars);
  const std::uint64_t cap = std::max<std::uint64_t>(1, ceil_sqrt(marks.size()));
  GroverOutcome out;
  std::optional<ScoredCandidate> best;
  std::uint64_t range = 1;

  for (std::uint32_t attempt = 0; attempt < config.max_attempts; ++attempt) {
    std::uniform_int_distribution<std::uint64_t> pick(0, range - 1);
    std::uint64_t r = pick(rng);
    std::vector<double> probs = amplify(marks, r);
    for (double& p : probs) p *= p;
    Histogram hist = sample_histogram(probs, config.shots, config.noise_epsilon, rng);

    ++out.attempts_used;
    out.total_iterations += r;
    out.iterations_per_attempt.push_back(r);
    out.range_per_attempt.push_back(range);
    for (const auto& [basis, count] : hist) out.histogram[basis] += count;

    ScoredCandidate cand = score_candidates(hist, sub, config.top_k);
    if (!best || better(cand, *best, sub.num_vars)) best = cand;
    if (best->q.violated == 0) break;

    // Next range: ceil(lambda * M), capped at ceil(sqrt(N)). The epsilon keeps
    // exact products such as 1.2 * 5 from rounding up to 7.
    auto grown = static_cast<std::uint64_t>(std::ceil(config.growth_factor * static_cast<double>(range) - 1e-9));
    range = std::min(std::max(grown, range), cap);
  }
  out.beta_q = best->basis;
  out.q = best->q;
  return out;
}

void write_histogram_csv(std::ostream& out, const Histogram& histogram, std::uint32_t n) {
  out << "assignment,count\n";
  for (const auto& [basis, count] : histogram) out << bitstring(basis, n) << ',' << count << '\n';
}

}  // namespace qgcl
