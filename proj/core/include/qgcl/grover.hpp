#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "qgcl/dimacs.hpp"

namespace qgcl {

struct GroverConfig {
  std::uint64_t shots = 2000;
  /// BBHT growth factor for the iteration-range bound M.
  double growth_factor = 1.2;
  std::uint32_t max_attempts = 12;
  std::uint32_t top_k = 5;
  /// Measurement noise: sample from (1-eps)*p + eps*uniform.
  double noise_epsilon = 0.0;
  /// Largest variable register simulated (2^n amplitudes).
  std::uint32_t max_sim_vars = 20;

  void validate() const;
};

/// Measurement counts keyed by basis index; bit i-1 of the key is dense variable i.
using Histogram = std::map<std::uint64_t, std::uint64_t>;

/// "x1 x2 ... xn" as a 0/1 string, x1 leftmost.
std::string bitstring(std::uint64_t basis, std::uint32_t n);
Assignment basis_to_assignment(std::uint64_t basis, std::uint32_t n);
std::uint64_t assignment_to_basis(const Assignment& a);

/// sin^2((2r+1) asin(sqrt(mu))): mass on the marked set after r iterations.
double success_probability(double mu, std::uint64_t r);

/// marks[x] is true iff basis assignment x satisfies the formula.
std::vector<bool> build_phase_marks(const Cnf& sub, std::uint32_t max_vars = 20);

/// Real amplitudes after r rounds of (diagonal oracle, inversion about the mean)
/// from the uniform state.
std::vector<double> amplify(const std::vector<bool>& marks, std::uint64_t r);

enum class GateKind { Hadamard, Not, MultiControlledNot, ControlledPhaseFlip };

struct Control {
  std::uint32_t wire;
  bool on_one;  // false: the control fires when the wire is |0>
  friend bool operator==(const Control&, const Control&) = default;
};

struct Gate {
  GateKind kind;
  std::uint32_t target;  // control wire for ControlledPhaseFlip
  std::vector<Control> controls;
  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Gate-level oracle. Wires: [0,n) variables, [n,n+m) clause ancillas, n+m flag.
struct CircuitDescription {
  std::uint32_t num_vars = 0;
  std::uint32_t num_clauses = 0;
  std::vector<Gate> preparation;  // Hadamards on the variable register
  std::vector<Gate> oracle;       // compute, phase, uncompute
  std::size_t phase_index = 0;    // position of the phase flip inside `oracle`

  std::uint32_t width() const { return num_vars + num_clauses + 1; }
  std::uint32_t flag_wire() const { return num_vars + num_clauses; }
  std::uint32_t clause_wire(std::uint32_t j) const { return num_vars + j; }
};

CircuitDescription build_gadget_circuit(const Cnf& sub, std::uint32_t max_width = 12);

struct BasisSimulation {
  int phase = 1;
  bool ancillas_zero = true;
};

/// Runs the oracle gates on |x>|0...0>. Every oracle gate is a permutation
/// or a diagonal phase, so basis inputs stay basis states.
BasisSimulation simulate_circuit(const CircuitDescription& circuit, std::uint64_t x);

/// Samples `config.shots` measurements after r Grover iterations.
Histogram grover_run(const Cnf& sub, std::uint64_t r, const GroverConfig& config, std::mt19937_64& rng);
Histogram sample_histogram(const std::vector<double>& probabilities, std::uint64_t shots, double noise_epsilon,
                           std::mt19937_64& rng);

struct ScoredCandidate {
  std::uint64_t basis = 0;
  std::uint64_t count = 0;
  ViolationFraction q;
};

/// Checks the top_k most frequent outcomes classically and returns the one
/// with the fewest violated clauses (ties: higher count, then bitstring order).
ScoredCandidate score_candidates(const Histogram& histogram, const Cnf& sub, std::uint32_t top_k);

struct GroverOutcome {
  Histogram histogram;  // merged over all attempts
  std::uint64_t beta_q = 0;
  ViolationFraction q;
  std::uint32_t attempts_used = 0;
  std::uint64_t total_iterations = 0;
  std::vector<std::uint64_t> iterations_per_attempt;
  std::vector<std::uint64_t> range_per_attempt;  // M used for each attempt

  Assignment assignment(std::uint32_t n) const { return basis_to_assignment(beta_q, n); }
};

std::uint64_t ceil_sqrt(std::uint64_t n);

GroverOutcome bbht_search(const Cnf& sub, const GroverConfig& config, std::mt19937_64& rng);

void write_histogram_csv(std::ostream& out, const Histogram& histogram, std::uint32_t n);

}  // namespace qgcl
