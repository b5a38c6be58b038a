#include "qgcl/scagen.hpp"

#include <bit>
#include <deque>
#include <stdexcept>

#include "json.hpp"

namespace qgcl::sca {

std::string_view to_string(LeakageRelation r) { return r == LeakageRelation::Equal ? "eq" : "neq"; }

LeakageRelation parse_relation(std::string_view s) {
  if (s == "eq") return LeakageRelation::Equal;
  if (s == "neq") return LeakageRelation::NotEqual;
  throw std::invalid_argument("unknown leakage relation '" + std::string(s) + "' (expected eq or neq)");
}

Bits ScaConfig::effective_plaintext() const { return plaintext.empty() ? Bits(width, true) : plaintext; }

void ScaConfig::validate() const {
  if (width < 2) throw std::invalid_argument("width must be >= 2");
  if (cycles < 1) throw std::invalid_argument("cycles must be >= 1");
  std::uint32_t cc = effective_check_cycle();
  if (cc < 1 || cc > cycles) throw std::invalid_argument("check_cycle must lie in [1, cycles]");
  if (!plaintext.empty() && plaintext.size() != width) throw std::invalid_argument("plaintext width mismatch");
  for (const auto& [bit, value] : fixed_key_bits)
    if (bit >= width) throw std::invalid_argument("fixed key bit index out of range");
}

std::vector<std::uint32_t> GateContext::fresh_block(std::uint32_t count) {
  std::vector<std::uint32_t> vars(count);
  for (auto& v : vars) v = fresh();
  return vars;
}

std::uint32_t encode_gate(TseitinGate kind, std::uint32_t a, std::uint32_t b, GateContext& ctx) {
  const std::uint32_t c = ctx.fresh();
  switch (kind) {
    case TseitinGate::Xor:
      ctx.add({neg(a), neg(b), neg(c)});
      ctx.add({pos(a), pos(b), neg(c)});
      ctx.add({pos(a), neg(b), pos(c)});
      ctx.add({neg(a), pos(b), pos(c)});
      break;
    case TseitinGate::And:
      ctx.add({neg(c), pos(a)});
      ctx.add({neg(c), pos(b)});
      ctx.add({pos(c), neg(a), neg(b)});
      break;
    case TseitinGate::Eq:
      ctx.add({neg(a), neg(b), pos(c)});
      ctx.add({pos(a), pos(b), pos(c)});
      ctx.add({pos(a), neg(b), neg(c)});
      ctx.add({neg(a), pos(b), neg(c)});
      break;
  }
  return c;
}

void encode_neq(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b, GateContext& ctx) {
  if (a.size() != b.size()) throw std::invalid_argument("encode_neq width mismatch");
  std::vector<Literal> any_diff;
  for (std::size_t i = 0; i < a.size(); ++i) any_diff.push_back(pos(encode_gate(TseitinGate::Xor, a[i], b[i], ctx)));
  ctx.add(Clause(std::move(any_diff)));
}

std::vector<std::uint32_t> encode_popcount(std::span<const std::uint32_t> bits, GateContext& ctx) {
  if (bits.empty()) throw std::invalid_argument("popcount of an empty vector");
  std::vector<std::deque<std::uint32_t>> columns(1, std::deque<std::uint32_t>(bits.begin(), bits.end()));
  for (std::size_t col = 0; col < columns.size(); ++col) {
    auto carry_into = [&](std::uint32_t v) {
      if (columns.size() <= col + 1) columns.emplace_back();
      columns[col + 1].push_back(v);
    };
    while (columns[col].size() >= 3) {
      std::uint32_t x = columns[col].front();
      columns[col].pop_front();
      std::uint32_t y = columns[col].front();
      columns[col].pop_front();
      std::uint32_t z = columns[col].front();
      columns[col].pop_front();
      std::uint32_t xy = encode_gate(TseitinGate::Xor, x, y, ctx);
      std::uint32_t sum = encode_gate(TseitinGate::Xor, xy, z, ctx);
      // The two carry terms are never both true, so XOR stands in for OR.
      std::uint32_t c1 = encode_gate(TseitinGate::And, x, y, ctx);
      std::uint32_t c2 = encode_gate(TseitinGate::And, xy, z, ctx);
      columns[col].push_back(sum);
      carry_into(encode_gate(TseitinGate::Xor, c1, c2, ctx));
    }
    if (columns[col].size() == 2) {
      std::uint32_t x = columns[col][0];
      std::uint32_t y = columns[col][1];
      columns[col].clear();
      columns[col].push_back(encode_gate(TseitinGate::Xor, x, y, ctx));
      carry_into(encode_gate(TseitinGate::And, x, y, ctx));
    }
  }
  const auto width = static_cast<std::size_t>(std::bit_width(bits.size()));
  std::vector<std::uint32_t> count;
  for (std::size_t i = 0; i < std::max(width, columns.size()); ++i) {
    const bool present = i < columns.size() && !columns[i].empty();
    if (i < width) {
      if (present) {
        count.push_back(columns[i].front());
      } else {
        std::uint32_t zero = ctx.fresh();
        ctx.fix(zero, false);
        count.push_back(zero);
      }
    } else if (present) {
      ctx.fix(columns[i].front(), false);  // can never be set: the weight is < 2^width
    }
  }
  return count;
}

Bits rotate_left(const Bits& bits, std::uint32_t k) {
  const std::size_t w = bits.size();
  Bits out(w);
  for (std::size_t i = 0; i < w; ++i) out[i] = bits[(i + k) % w];
  return out;
}

Bits substitute(const Bits& bits) {
  const std::size_t w = bits.size();
  Bits out(w);
  for (std::size_t i = 0; i < w; ++i) out[i] = bits[i] != (bits[(i + 1) % w] && bits[(i + 2) % w]);
  return out;
}

std::uint32_t hamming_weight(const Bits& bits) {
  std::uint32_t n = 0;
  for (bool b : bits) n += b ? 1 : 0;
  return n;
}

Bits parse_bits(std::string_view s) {
  Bits out;
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("bit string must contain only 0 and 1");
    out.push_back(ch == '1');
  }
  return out;
}

std::string format_bits(const Bits& bits) {
  std::string s;
  for (bool b : bits) s.push_back(b ? '1' : '0');
  return s;
}

ExecutionTrace simulate_execution(const ScaConfig& config, const Bits& key) {
  if (key.size() != config.width) throw std::invalid_argument("key width mismatch");
  ExecutionTrace trace;
  trace.states.push_back(config.effective_plaintext());
  for (std::uint32_t t = 1; t <= config.cycles; ++t) {
    Bits rk = rotate_left(key, t % config.width);
    Bits s = trace.states.back();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = s[i] != rk[i];
    if (config.substitution) s = substitute(s);
    trace.leakage.push_back(hamming_weight(s));
    trace.states.push_back(std::move(s));
  }
  return trace;
}

std::pair<ExecutionTrace, ExecutionTrace> simulate_reference(const ScaConfig& config, const Bits& key_a,
                                                             const Bits& key_b) {
  return {simulate_execution(config, key_a), simulate_execution(config, key_b)};
}

bool pair_is_witness(const ScaConfig& config, const Bits& key_a, const Bits& key_b) {
  if (key_a == key_b) return false;
  for (const auto& [bit, value] : config.fixed_key_bits)
    if (key_a[bit] != value || key_b[bit] != value) return false;
  auto [ta, tb] = simulate_reference(config, key_a, key_b);
  const std::uint32_t cc = config.effective_check_cycle();
  const bool equal = ta.leakage[cc - 1] == tb.leakage[cc - 1];
  return config.relation == LeakageRelation::Equal ? equal : !equal;
}

namespace {

VarRange block_range(const std::vector<std::uint32_t>& vars) {
  return VarRange{vars.front(), static_cast<std::uint32_t>(vars.size())};
}

std::vector<std::uint32_t> range_vars(const VarRange& r) {
  std::vector<std::uint32_t> out(r.count);
  for (std::uint32_t i = 0; i < r.count; ++i) out[i] = r.var(i);
  return out;
}

// One execution: plaintext units, then per cycle the keyed XOR and optional
// substitution layer. Each layer allocates one contiguous block.
std::vector<VarRange> encode_execution(const ScaConfig& config, const VarRange& key, GateContext& ctx) {
  const std::uint32_t w = config.width;
  std::vector<VarRange> states;
  std::vector<std::uint32_t> s0 = ctx.fresh_block(w);
  Bits pt = config.effective_plaintext();
  for (std::uint32_t i = 0; i < w; ++i) ctx.fix(s0[i], pt[i]);
  states.push_back(block_range(s0));

  std::vector<std::uint32_t> prev = s0;
  for (std::uint32_t t = 1; t <= config.cycles; ++t) {
    const std::uint32_t rot = t % w;
    std::vector<std::uint32_t> mixed(w);
    for (std::uint32_t i = 0; i < w; ++i) mixed[i] = encode_gate(TseitinGate::Xor, prev[i], key.var((i + rot) % w), ctx);
    if (config.substitution) {
      std::vector<std::uint32_t> ands(w);
      for (std::uint32_t i = 0; i < w; ++i)
        ands[i] = encode_gate(TseitinGate::And, mixed[(i + 1) % w], mixed[(i + 2) % w], ctx);
      std::vector<std::uint32_t> out(w);
      for (std::uint32_t i = 0; i < w; ++i) out[i] = encode_gate(TseitinGate::Xor, mixed[i], ands[i], ctx);
      mixed = std::move(out);
    }
    states.push_back(block_range(mixed));
    prev = std::move(mixed);
  }
  return states;
}

}  // namespace

Instance generate_instance(const ScaConfig& config) {
  config.validate();
  GateContext ctx;
  InstanceMeta meta;
  meta.config = config;
  meta.key_a = block_range(ctx.fresh_block(config.width));
  meta.key_b = block_range(ctx.fresh_block(config.width));
  for (const auto& [bit, value] : config.fixed_key_bits) {
    ctx.fix(meta.key_a.var(bit), value);
    ctx.fix(meta.key_b.var(bit), value);
  }
  meta.states_a = encode_execution(config, meta.key_a, ctx);
  meta.states_b = encode_execution(config, meta.key_b, ctx);
  encode_neq(range_vars(meta.key_a), range_vars(meta.key_b), ctx);

  const std::uint32_t cc = config.effective_check_cycle();
  meta.leak_a = encode_popcount(range_vars(meta.states_a[cc]), ctx);
  meta.leak_b = encode_popcount(range_vars(meta.states_b[cc]), ctx);
  if (config.relation == LeakageRelation::Equal) {
    for (std::size_t i = 0; i < meta.leak_a.size(); ++i)
      ctx.fix(encode_gate(TseitinGate::Eq, meta.leak_a[i], meta.leak_b[i], ctx), true);
  } else {
    encode_neq(meta.leak_a, meta.leak_b, ctx);
  }

  Instance inst{ctx.to_cnf(), std::move(meta)};
  inst.meta.num_vars = inst.cnf.num_vars;
  inst.meta.num_clauses = inst.cnf.clauses.size();
  return inst;
}

DecodedModel decode_model(const InstanceMeta& meta, const Assignment& model) {
  if (model.size() != meta.num_vars) throw std::invalid_argument("model length does not match instance");
  auto read = [&](const VarRange& r) {
    Bits b(r.count);
    for (std::uint32_t i = 0; i < r.count; ++i) b[i] = model[r.var(i) - 1];
    return b;
  };
  auto read_count = [&](const std::vector<std::uint32_t>& vars) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (model[vars[i] - 1]) v |= 1U << i;
    return v;
  };
  DecodedModel d;
  d.key_a = read(meta.key_a);
  d.key_b = read(meta.key_b);
  for (const auto& r : meta.states_a) d.states_a.push_back(read(r));
  for (const auto& r : meta.states_b) d.states_b.push_back(read(r));
  d.leak_a = read_count(meta.leak_a);
  d.leak_b = read_count(meta.leak_b);
  return d;
}

namespace {

using nlohmann::json;

json range_json(const VarRange& r) { return json{{"first", r.first}, {"count", r.count}}; }
VarRange range_from(const json& j) { return VarRange{j.at("first").get<std::uint32_t>(), j.at("count").get<std::uint32_t>()}; }

}  // namespace

std::string meta_to_json(const InstanceMeta& meta) {
  const ScaConfig& c = meta.config;
  json fixed = json::array();
  for (const auto& [bit, value] : c.fixed_key_bits) fixed.push_back(json{{"bit", bit}, {"value", value}});
  json j;
  j["config"] = {{"width", c.width},
                 {"cycles", c.cycles},
                 {"substitution", c.substitution},
                 {"relation", std::string(to_string(c.relation))},
                 {"check_cycle", c.effective_check_cycle()},
                 {"plaintext", format_bits(c.effective_plaintext())},
                 {"fixed_key_bits", fixed}};
  j["key_a"] = range_json(meta.key_a);
  j["key_b"] = range_json(meta.key_b);
  j["states_a"] = json::array();
  j["states_b"] = json::array();
  for (const auto& r : meta.states_a) j["states_a"].push_back(range_json(r));
  for (const auto& r : meta.states_b) j["states_b"].push_back(range_json(r));
  j["leak_a"] = meta.leak_a;
  j["leak_b"] = meta.leak_b;
  j["n"] = meta.num_vars;
  j["m"] = meta.num_clauses;
  return j.dump(2) + "\n";
}

InstanceMeta meta_from_json(std::string_view text) {
  json j = json::parse(text);
  InstanceMeta meta;
  const json& c = j.at("config");
  meta.config.width = c.at("width").get<std::uint32_t>();
  meta.config.cycles = c.at("cycles").get<std::uint32_t>();
  meta.config.substitution = c.at("substitution").get<bool>();
  meta.config.relation = parse_relation(c.at("relation").get<std::string>());
  meta.config.check_cycle = c.at("check_cycle").get<std::uint32_t>();
  meta.config.plaintext = parse_bits(c.at("plaintext").get<std::string>());
  for (const json& f : c.at("fixed_key_bits"))
    meta.config.fixed_key_bits.emplace_back(f.at("bit").get<std::uint32_t>(), f.at("value").get<bool>());
  meta.key_a = range_from(j.at("key_a"));
  meta.key_b = range_from(j.at("key_b"));
  for (const json& r : j.at("states_a")) meta.states_a.push_back(range_from(r));
  for (const json& r : j.at("states_b")) meta.states_b.push_back(range_from(r));
  meta.leak_a = j.at("leak_a").get<std::vector<std::uint32_t>>();
  meta.leak_b = j.at("leak_b").get<std::vector<std::uint32_t>>();
  meta.num_vars = j.at("n").get<std::uint32_t>();
  meta.num_clauses = j.at("m").get<std::size_t>();
  return meta;
}

}  // namespace qgcl::sca
