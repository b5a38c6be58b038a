#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qgcl/dimacs.hpp"

namespace qgcl::sca {

using Bits = std::vector<bool>;

enum class LeakageRelation { Equal, NotEqual };

std::string_view to_string(LeakageRelation r);
LeakageRelation parse_relation(std::string_view s);  // "eq" / "neq"

struct ScaConfig {
  std::uint32_t width = 4;
  std::uint32_t cycles = 1;
  bool substitution = false;
  /// Known seed-key bits (bit index, value), fixed in both executions.
  std::vector<std::pair<std::uint32_t, bool>> fixed_key_bits;
  LeakageRelation relation = LeakageRelation::NotEqual;
  /// Cycle whose leakage is compared; defaults to the last cycle.
  std::optional<std::uint32_t> check_cycle;
  /// Empty means all ones.
  Bits plaintext;

  std::uint32_t effective_check_cycle() const { return check_cycle.value_or(cycles); }
  Bits effective_plaintext() const;
  void validate() const;
};

enum class TseitinGate { Xor, And, Eq };

/// Fresh-variable allocator plus clause sink for Tseitin encoding.
class GateContext {
 public:
  explicit GateContext(std::uint32_t used_vars = 0) : num_vars_(used_vars) {}

  std::uint32_t fresh() { return ++num_vars_; }
  std::vector<std::uint32_t> fresh_block(std::uint32_t count);
  void add(Clause c) { clauses_.push_back(std::move(c)); }
  void fix(std::uint32_t var, bool value) { add(Clause{Literal(var, value)}); }

  std::uint32_t num_vars() const { return num_vars_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  Cnf to_cnf() const { return Cnf{num_vars_, clauses_}; }

 private:
  std::uint32_t num_vars_;
  std::vector<Clause> clauses_;
};

/// Fresh c with c = kind(a, b). XOR and EQ emit 4 clauses, AND emits 3.
std::uint32_t encode_gate(TseitinGate kind, std::uint32_t a, std::uint32_t b, GateContext& ctx);

/// Forces the two vectors to differ in at least one position.
void encode_neq(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b, GateContext& ctx);

/// Adder-tree popcount. Returns bit_width(bits.size()) count variables, least
/// significant first.
std::vector<std::uint32_t> encode_popcount(std::span<const std::uint32_t> bits, GateContext& ctx);

// Reference semantics. Bit 0 is the leftmost character of a bit string.
Bits rotate_left(const Bits& bits, std::uint32_t k);
Bits substitute(const Bits& bits);  // out_i = in_i ^ (in_{i+1} & in_{i+2})
std::uint32_t hamming_weight(const Bits& bits);
Bits parse_bits(std::string_view s);
std::string format_bits(const Bits& bits);

struct ExecutionTrace {
  std::vector<Bits> states;            // states[t], t = 0..T
  std::vector<std::uint32_t> leakage;  // leakage[t-1] = HW(states[t]), t = 1..T
};

ExecutionTrace simulate_execution(const ScaConfig& config, const Bits& key);
std::pair<ExecutionTrace, ExecutionTrace> simulate_reference(const ScaConfig& config, const Bits& key_a,
                                                             const Bits& key_b);

/// True iff the key pair satisfies every constraint of the generated instance.
bool pair_is_witness(const ScaConfig& config, const Bits& key_a, const Bits& key_b);

struct VarRange {
  std::uint32_t first = 0;
  std::uint32_t count = 0;
  std::uint32_t var(std::uint32_t i) const { return first + i; }
  std::uint32_t last() const { return first + count - 1; }
};

struct InstanceMeta {
  ScaConfig config;
  VarRange key_a;
  VarRange key_b;
  std::vector<VarRange> states_a;  // t = 0..T
  std::vector<VarRange> states_b;
  std::vector<std::uint32_t> leak_a;  // popcount bits at the check cycle, LSB first
  std::vector<std::uint32_t> leak_b;
  std::uint32_t num_vars = 0;
  std::size_t num_clauses = 0;
};

std::string meta_to_json(const InstanceMeta& meta);
InstanceMeta meta_from_json(std::string_view text);

struct Instance {
  Cnf cnf;
  InstanceMeta meta;
};

Instance generate_instance(const ScaConfig& config);

struct DecodedModel {
  Bits key_a;
  Bits key_b;
  std::vector<Bits> states_a;
  std::vector<Bits> states_b;
  std::uint32_t leak_a = 0;
  std::uint32_t leak_b = 0;
};

DecodedModel decode_model(const InstanceMeta& meta, const Assignment& model);

}  // namespace qgcl::sca
