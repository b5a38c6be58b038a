// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qgcl/cdcl.hpp"
#include "qgcl/extract.hpp"
#include "qgcl/grover.hpp"
#include "qgcl/hybrid.hpp"
#include "qgcl/scagen.hpp"

using namespace qgcl;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Outcome& o) {
  std::printf("[%s] criterion %d: %s -- %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::uint64_t as_bits(const Assignment& a) {
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < a.size(); ++i) x |= std::uint64_t{a[i]} << i;
  return x;
}

// 1 ------------------------------------------------------------------------

Outcome verdict_equivalence() {
  auto start = Clock::now();
  std::mt19937_64 rng(1001);
  std::vector<Cnf> corpus;
  std::uniform_int_distribution<std::uint32_t> nvars(8, 60);
  std::uniform_real_distribution<double> ratio(3.5, 4.5);
  for (int i = 0; i < 240; ++i) {
    std::uint32_t n = nvars(rng);
    corpus.push_back(testing::random_kcnf(n, static_cast<std::size_t>(std::lround(ratio(rng) * n)), 3, rng));
  }
  std::size_t random_count = corpus.size();
  for (std::uint32_t w = 2; w <= 8; w += 2)
    for (std::uint32_t T = 1; T <= 2; ++T)
      for (bool subst : {false, true})
        for (auto rel : {sca::LeakageRelation::Equal, sca::LeakageRelation::NotEqual}) {
          sca::ScaConfig cfg;
          cfg.width = w;
          cfg.cycles = T;
          cfg.substitution = subst;
          cfg.relation = rel;
          if (w == 2 && rel == sca::LeakageRelation::Equal) cfg.fixed_key_bits = {{0, false}};
          corpus.push_back(sca::generate_instance(cfg).cnf);
        }
  std::size_t sca_count = corpus.size() - random_count;

  std::size_t runs = 0, mismatches = 0, bad_models = 0, enum_checked = 0, enum_mismatch = 0, sat = 0, calls = 0;
  for (const Cnf& cnf : corpus) {
    std::optional<bool> truth;
    if (cnf.num_vars <= 20) truth = testing::brute_force_model(cnf).has_value();
    if (truth) ++enum_checked;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      HybridConfig cfg;
      cfg.solver.random_seed = seed;
      cfg.grover_interval = 10;  // small k so call points occur on small instances
      cfg.grover.shots = 500;
      SolveResult base = solve(cnf, cfg.solver);
      HybridResult hyb = solve_hybrid(cnf, cfg);
      ++runs;
      calls += hyb.calls.size();
      if (base.status != hyb.result.status) ++mismatches;
      for (const SolveResult* r : {&base, &hyb.result})
        if (r->status == SolveStatus::Sat && !check_model(cnf, r->model)) ++bad_models;
      if (base.status == SolveStatus::Sat) ++sat;
      if (truth && (base.status == SolveStatus::Sat) != *truth) ++enum_mismatch;
      if (truth && (hyb.result.status == SolveStatus::Sat) != *truth) ++enum_mismatch;
    }
  }
  double elapsed = seconds_since(start);
  Outcome o;
  o.pass = mismatches == 0 && bad_models == 0 && enum_mismatch == 0 && random_count >= 200 && sca_count >= 20 &&
           elapsed < 300.0;
  o.detail = fmt("%zu random 3-SAT + %zu SCA instances x 3 seeds, %zu paired runs (%zu SAT), %zu grover calls; "
                 "verdict mismatches %zu, invalid models %zu, enumeration-checked %zu with %zu mismatches; %.1fs",
                 random_count, sca_count, runs, sat, calls, mismatches, bad_models, enum_checked, enum_mismatch,
                 elapsed);
  return o;
}

// 2 ------------------------------------------------------------------------

Outcome worked_example() {
  Cnf cnf = testing::worked_example_formula();
  SolverSnapshot snap;
  snap.num_vars = 6;
  snap.clauses = cnf.clauses;
  snap.clause_activity.assign(7, 0.0);
  snap.learned.assign(7, false);
  snap.var_activity.assign(6, 0.0);
  snap.values.assign(6, LBool::Undef);
  snap.values[0] = LBool::True;
  snap.values[3] = LBool::False;
  ExtractionConfig cfg;
  cfg.budget = 8;
  std::mt19937_64 rng(1);
  ExtractionResult r = extract_subformula(snap, cfg, rng, 2);
  Outcome o;
  if (!r.sub) {
    o.pass = false;
    o.detail = std::string("extraction returned ") + to_string(r.status);
    return o;
  }
  auto key = [](std::vector<Clause> cs) {
    std::vector<std::vector<int>> out;
    for (const Clause& c : cs) {
      std::vector<int> l;
      for (const Literal& x : c) l.push_back(x.to_dimacs());
      std::sort(l.begin(), l.end());
      out.push_back(l);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<Clause> global;
  for (const Clause& c : r.sub->cnf.clauses) {
    std::vector<Literal> l;
    for (const Literal& x : c) l.emplace_back(r.sub->var_map[x.var - 1], x.positive);
    global.emplace_back(l);
  }
  std::vector<Clause> expected{Clause{neg(2)}, Clause{pos(3)}, Clause{pos(2), neg(6)}, Clause{neg(5), pos(6)}};
  o.pass = key(global) == key(expected) && r.sub->var_map == std::vector<std::uint32_t>{2, 3, 5, 6};
  std::string text;
  for (const Clause& c : global) {
    text += "(";
    for (std::size_t i = 0; i < c.size(); ++i) text += (i ? " " : "") + std::to_string(c[i].to_dimacs());
    text += ")";
  }
  o.detail = "seed C3, trail {x1=1,x4=0}, cap 8: " + text + " over x2,x3,x5,x6";
  return o;
}

// 3 ------------------------------------------------------------------------

Outcome oracle_equivalence() {
  std::mt19937_64 rng(1003);
  std::size_t formulas = 0, inputs = 0, wrong_phase = 0, dirty = 0;
  std::vector<Cnf> suite;
  suite.push_back(Cnf{4, {Clause{neg(1)}, Clause{pos(2)}, Clause{pos(1), neg(4)}, Clause{neg(3), pos(4)}}});
  suite.push_back(Cnf{2, {}});
  suite.push_back(Cnf{1, {Clause{pos(1)}, Clause{neg(1)}}});
  for (std::uint32_t n = 1; n <= 10; ++n)
    for (std::uint32_t m = 0; n + m + 1 <= 12; ++m)
      for (int rep = 0; rep < 20; ++rep) {
        std::uint32_t k = 1 + rng() % std::min<std::uint32_t>(n, 4);
        suite.push_back(testing::random_kcnf(n, m, k, rng));
      }
  for (const Cnf& f : suite) {
    CircuitDescription c = build_gadget_circuit(f);
    ++formulas;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << f.num_vars); ++x) {
      BasisSimulation s = simulate_circuit(c, x);
      ++inputs;
      if (s.phase != (testing::naive_violations(f.clauses, x) == 0 ? -1 : 1)) ++wrong_phase;
      if (!s.ancillas_zero) ++dirty;
    }
  }
  Outcome o;
  o.pass = wrong_phase == 0 && dirty == 0;
  o.detail = fmt("%zu sub-CNFs with width <= 12, %zu basis inputs; phase mismatches %zu, dirty ancillas %zu", formulas,
                 inputs, wrong_phase, dirty);
  return o;
}

// 4 ------------------------------------------------------------------------

Outcome analytic_amplification() {
  std::mt19937_64 rng(1004);
  double worst = 0.0;
  std::size_t points = 0;
  for (std::uint32_t n = 1; n <= 10; ++n) {
    std::size_t N = std::size_t{1} << n;
    std::vector<std::size_t> ks{0, 1, 2, 3, N / 4, N / 2, N - 1, N};
    for (std::size_t K : ks) {
      if (K > N) continue;
      std::vector<bool> marks(N, false);
      std::vector<std::size_t> idx(N);
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      for (std::size_t i = 0; i < K; ++i) marks[idx[i]] = true;
      for (std::uint64_t r = 0; r <= 20; ++r) {
        auto amp = amplify(marks, r);
        double mass = 0.0;
        for (std::size_t i = 0; i < N; ++i)
          if (marks[i]) mass += amp[i] * amp[i];
        double s = std::sin((2.0 * r + 1.0) * std::asin(std::sqrt(static_cast<double>(K) / N)));
        worst = std::max(worst, std::abs(mass - s * s));
        ++points;
      }
    }
  }
  double p1 = success_probability(0.25, 1);
  double p2 = success_probability(0.125, 2);
  double s2 = std::sin(5.0 * std::asin(std::sqrt(0.125)));
  double oracle2 = s2 * s2;  // exactly 121/128
  Outcome o;
  o.pass = worst < 1e-9 && p1 == 1.0 && std::abs(p2 - oracle2) < 1e-9;
  o.detail = fmt("%zu grid points, max |sim - closed form| = %.2e; P(1/4,1) = %.17g; P(1/8,2) = %.9f "
                 "(closed form %.9f; the 0.94529 literal differs by %.2e)",
                 points, worst, p1, p2, oracle2, std::abs(oracle2 - 0.94529));
  return o;
}

// 5 ------------------------------------------------------------------------

bool uniform_within_3sigma(const Histogram& h, std::size_t N, std::uint64_t shots) {
  double expect = static_cast<double>(shots) / N;
  auto count = [&](std::size_t x) {
    auto it = h.find(x);
    return it == h.end() ? 0.0 : static_cast<double>(it->second);
  };
  if (N <= 4) {
    double sd = std::sqrt(shots * (1.0 / N) * (1.0 - 1.0 / N));
    for (std::size_t x = 0; x < N; ++x)
      if (std::abs(count(x) - expect) > 3.0 * sd) return false;
    return true;
  }
  double chi = 0.0;
  for (std::size_t x = 0; x < N; ++x) chi += (count(x) - expect) * (count(x) - expect) / expect;
  double df = static_cast<double>(N - 1);
  return chi <= df + 3.0 * std::sqrt(2.0 * df);
}

Outcome bbht_behavior() {
  std::mt19937_64 gen(1005);
  Cnf unique;
  for (;;) {
    unique = testing::random_kcnf(8, 40, 3, gen);
    if (testing::count_models(unique) == 1) break;
  }
  std::uint64_t solution = *testing::brute_force_model(unique);
  int found = 0;
  std::uint64_t max_iter = 0;
  GroverConfig cfg;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    GroverOutcome out = bbht_search(unique, cfg, rng);
    if (out.q.violated == 0 && out.beta_q == solution) ++found;
    for (std::uint64_t it : out.iterations_per_attempt) max_iter = std::max(max_iter, it);
  }

  std::vector<Cnf> unsat{Cnf{1, {Clause{pos(1)}, Clause{neg(1)}}}, testing::pigeonhole(3, 2),
                         Cnf{3, {Clause{pos(1), pos(2)}, Clause{neg(1), pos(2)}, Clause{pos(1), neg(2)},
                                 Clause{neg(1), neg(2)}, Clause{pos(3)}}}};
  for (;;) {
    Cnf f = testing::random_kcnf(8, 90, 3, gen);
    if (testing::count_models(f) == 0) {
      unsat.push_back(f);
      break;
    }
  }
  bool unsat_ok = true;
  std::string qs;
  for (const Cnf& f : unsat) {
    std::mt19937_64 rng(7);
    GroverOutcome out = bbht_search(f, cfg, rng);
    unsat_ok = unsat_ok && out.q.violated > 0;
    Histogram h = grover_run(f, 0, cfg, rng);
    unsat_ok = unsat_ok && uniform_within_3sigma(h, std::size_t{1} << f.num_vars, cfg.shots);
    qs += fmt(" %.3f", out.q.value());
  }
  Outcome o;
  o.pass = found >= 95 && max_iter <= 16 && unsat_ok;
  o.detail = fmt("unique-solution n=8: found in %d/100 runs, max iterations per attempt %llu (cap 16); "
                 "%zu UNSAT subformulas q =%s, r=0 histograms uniform: %s",
                 found, static_cast<unsigned long long>(max_iter), unsat.size(), qs.c_str(), unsat_ok ? "yes" : "no");
  return o;
}

// 6 ------------------------------------------------------------------------

Outcome popcount_and_gadgets() {
  std::size_t inputs = 0, wrong = 0;
  for (std::uint32_t w = 1; w <= 8; ++w) {
    sca::GateContext ctx(w);
    std::vector<std::uint32_t> in(w);
    std::iota(in.begin(), in.end(), 1u);
    auto count = sca::encode_popcount(in, ctx);
    Cnf base = ctx.to_cnf();
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << w); ++x) {
      Cnf cnf = base;
      for (std::uint32_t i = 0; i < w; ++i) cnf.clauses.push_back(Clause{Literal(in[i], ((x >> i) & 1U) != 0)});
      SolveResult r = solve(cnf);
      ++inputs;
      if (r.status != SolveStatus::Sat) {
        ++wrong;
        continue;
      }
      std::uint64_t got = 0;
      for (std::size_t i = 0; i < count.size(); ++i)
        if (r.model[count[i] - 1]) got |= std::uint64_t{1} << i;
      std::vector<Literal> block;
      for (std::size_t i = 0; i < count.size(); ++i) block.emplace_back(count[i], ((got >> i) & 1U) == 0);
      cnf.clauses.emplace_back(block);
      bool unique = solve(cnf).status == SolveStatus::Unsat;
      if (got != static_cast<std::uint64_t>(std::popcount(x)) || !unique) ++wrong;
    }
  }
  std::size_t gadget_wrong = 0;
  for (auto g : {sca::TseitinGate::Xor, sca::TseitinGate::And, sca::TseitinGate::Eq}) {
    sca::GateContext ctx(2);
    sca::encode_gate(g, 1, 2, ctx);
    Cnf cnf = ctx.to_cnf();
    for (std::uint64_t x = 0; x < 8; ++x) {
      bool a = x & 1, b = x & 2, c = x & 4;
      bool want = g == sca::TseitinGate::Xor ? a != b : g == sca::TseitinGate::And ? (a && b) : a == b;
      if ((testing::naive_violations(cnf.clauses, x) == 0) != (c == want)) ++gadget_wrong;
    }
  }
  Outcome o;
  o.pass = wrong == 0 && gadget_wrong == 0;
  o.detail = fmt("popcount widths 1..8, %zu inputs, %zu wrong or non-unique counts; XOR/AND/EQ truth-table "
                 "mismatches %zu",
                 inputs, wrong, gadget_wrong);
  return o;
}

// 7 ------------------------------------------------------------------------

sca::Bits bits_of(std::uint64_t x, std::uint32_t w) {
  sca::Bits b(w);
  for (std::uint32_t i = 0; i < w; ++i) b[i] = ((x >> i) & 1U) != 0;
  return b;
}

Outcome generator_end_to_end() {
  std::size_t configs = 0, sat = 0, verdict_wrong = 0, decode_wrong = 0, witness_wrong = 0;
  for (std::uint32_t w = 2; w <= 6; ++w)
    for (std::uint32_t T = 1; T <= 2; ++T)
      for (bool subst : {false, true})
        for (auto rel : {sca::LeakageRelation::Equal, sca::LeakageRelation::NotEqual})
          for (int fix = 0; fix < 3; ++fix) {
            sca::ScaConfig cfg;
            cfg.width = w;
            cfg.cycles = T;
            cfg.substitution = subst;
            cfg.relation = rel;
            if (fix == 1) cfg.fixed_key_bits = {{0, false}};
            if (fix == 2) {
              for (std::uint32_t i = 0; i + 1 < w; ++i) cfg.fixed_key_bits.emplace_back(i, i % 2 == 1);
              cfg.check_cycle = 1;
            }
            sca::Instance inst = sca::generate_instance(cfg);
            ++configs;
            std::optional<std::pair<sca::Bits, sca::Bits>> witness;
            for (std::uint64_t a = 0; a < (std::uint64_t{1} << w) && !witness; ++a)
              for (std::uint64_t b = 0; b < (std::uint64_t{1} << w) && !witness; ++b)
                if (sca::pair_is_witness(cfg, bits_of(a, w), bits_of(b, w)))
                  witness = std::make_pair(bits_of(a, w), bits_of(b, w));
            SolveResult r = solve(inst.cnf);
            if ((r.status == SolveStatus::Sat) != witness.has_value()) ++verdict_wrong;
            if (r.status == SolveStatus::Sat) {
              ++sat;
              sca::DecodedModel d = sca::decode_model(inst.meta, r.model);
              auto [ta, tb] = sca::simulate_reference(cfg, d.key_a, d.key_b);
              if (!sca::pair_is_witness(cfg, d.key_a, d.key_b) || d.states_a != ta.states || d.states_b != tb.states)
                ++decode_wrong;
            }
            if (witness) {
              Cnf pinned = inst.cnf;
              for (std::uint32_t i = 0; i < w; ++i) {
                pinned.clauses.push_back(Clause{Literal(inst.meta.key_a.var(i), witness->first[i])});
                pinned.clauses.push_back(Clause{Literal(inst.meta.key_b.var(i), witness->second[i])});
              }
              if (solve(pinned).status != SolveStatus::Sat) ++witness_wrong;
            }
          }
  Outcome o;
  o.pass = verdict_wrong == 0 && decode_wrong == 0 && witness_wrong == 0;
  o.detail = fmt("%zu configs (w 2..6, T 1..2, subst on/off, eq/neq, fixed bits), %zu SAT; verdict mismatches %zu, "
                 "trajectory mismatches %zu, rejected brute-force witnesses %zu",
                 configs, sat, verdict_wrong, decode_wrong, witness_wrong);
  return o;
}

// 8, 9, 10 -----------------------------------------------------------------

struct FamilyRuns {
  struct Member {
    std::uint64_t gen_seed;
    Cnf cnf;
    std::vector<SolveResult> base;
    std::vector<HybridResult> hyb;
  };
  std::vector<Member> members;
  std::vector<std::uint64_t> rejected;
  double seconds = 0.0;
};

constexpr std::uint32_t kFamilyVars = 200;
constexpr double kFamilyRatio = 4.26;
constexpr std::uint64_t kFamilyCandidates = 8;
constexpr std::uint64_t kSeeds = 10;

// Family: uniform random 3-SAT, n = 200, m = round(4.26 n), generator seeds
// 1..8. A candidate joins when the baseline finds it SAT on every seed with a
// mean of at least 5000 conflicts. Membership depends on the baseline only.
FamilyRuns run_family() {
  auto start = Clock::now();
  FamilyRuns fam;
  for (std::uint64_t g = 1; g <= kFamilyCandidates; ++g) {
    std::mt19937_64 rng(g);
    FamilyRuns::Member m;
    m.gen_seed = g;
    m.cnf = testing::random_kcnf(kFamilyVars, static_cast<std::size_t>(std::lround(kFamilyRatio * kFamilyVars)), 3,
                                 rng);
    double total = 0.0;
    bool all_sat = true;
    for (std::uint64_t s = 1; s <= kSeeds; ++s) {
      SolverConfig sc;
      sc.random_seed = s;
      m.base.push_back(solve(m.cnf, sc));
      total += static_cast<double>(m.base.back().stats.conflicts);
      all_sat = all_sat && m.base.back().status == SolveStatus::Sat;
    }
    if (!all_sat || total / kSeeds < 5000.0) {
      fam.rejected.push_back(g);
      continue;
    }
    for (std::uint64_t s = 1; s <= kSeeds; ++s) {
      HybridConfig hc;
      hc.solver.random_seed = s;
      m.hyb.push_back(solve_hybrid(m.cnf, hc));
    }
    fam.members.push_back(std::move(m));
  }
  fam.seconds = seconds_since(start);
  return fam;
}

Outcome directional_benefit(const FamilyRuns& fam) {
  double base = 0.0, hyb = 0.0;
  std::size_t runs = 0, better = 0;
  std::string per;
  for (const auto& m : fam.members) {
    double b = 0.0, h = 0.0;
    for (std::size_t i = 0; i < kSeeds; ++i) {
      b += static_cast<double>(m.base[i].stats.conflicts);
      h += static_cast<double>(m.hyb[i].result.stats.conflicts);
    }
    base += b;
    hyb += h;
    runs += kSeeds;
    if (h <= b) ++better;
    per += fmt(" g%llu:%.0f/%.0f", static_cast<unsigned long long>(m.gen_seed), b / kSeeds, h / kSeeds);
  }
  Outcome o;
  if (fam.members.empty()) {
    o.pass = false;
    o.detail = "no candidate reached a baseline mean of 5000 conflicts";
    return o;
  }
  double bm = base / static_cast<double>(runs), hm = hyb / static_cast<double>(runs);
  o.pass = bm >= 5000.0 && hm <= bm && fam.seconds < 600.0;
  o.detail = fmt("random 3-SAT n=%u ratio %.2f, %zu of %llu candidates admitted, %llu seeds; mean conflicts "
                 "baseline %.1f, qgcl %.1f (%+.1f%%); instances where qgcl <= baseline: %zu/%zu; per instance "
                 "baseline/qgcl:%s; %.1fs",
                 kFamilyVars, kFamilyRatio, fam.members.size(), static_cast<unsigned long long>(kFamilyCandidates),
                 static_cast<unsigned long long>(kSeeds), bm, hm, 100.0 * (hm - bm) / bm, better, fam.members.size(),
                 per.c_str(), fam.seconds);
  return o;
}

Outcome heuristic_only(const FamilyRuns& fam) {
  std::size_t runs = 0, calls = 0, mismatches = 0, over_calls = 0, over_budget = 0, skipped = 0;
  HybridConfig defaults;
  for (const auto& m : fam.members)
    for (const HybridResult& h : m.hyb) {
      ++runs;
      calls += h.calls.size();
      skipped += h.skipped_calls;
      mismatches += h.feedback_hash_mismatches;
      if (h.calls.size() > defaults.max_grover_calls) ++over_calls;
      for (const CallRecord& c : h.calls)
        if (c.n_sub + c.m_sub > defaults.budget()) ++over_budget;
    }
  Outcome o;
  o.pass = runs > 0 && calls > 0 && mismatches == 0 && over_calls == 0 && over_budget == 0;
  o.detail = fmt("%zu qgcl runs, %zu apply_hints calls (%zu skipped call points); hash changes %zu, runs over call "
                 "cap %zu, records over budget %zu",
                 runs, calls, skipped, mismatches, over_calls, over_budget);
  return o;
}

Outcome reproducibility(const FamilyRuns& fam) {
  std::size_t repeats = 0, differ = 0;
  for (const auto& m : fam.members) {
    for (std::uint64_t s = 1; s <= 2; ++s) {
      HybridConfig hc;
      hc.solver.random_seed = s;
      HybridResult again = solve_hybrid(m.cnf, hc);
      const HybridResult& first = m.hyb[s - 1];
      ++repeats;
      if (!again.result.stats.same_counters(first.result.stats) || again.calls != first.calls ||
          again.result.model != first.result.model)
        ++differ;
      SolverConfig sc;
      sc.random_seed = s;
      SolveResult b = solve(m.cnf, sc);
      ++repeats;
      if (!b.stats.same_counters(m.base[s - 1].stats) || b.model != m.base[s - 1].model) ++differ;
    }
  }
  // Small instances across strategies and noise settings.
  std::mt19937_64 rng(1010);
  for (int i = 0; i < 20; ++i) {
    Cnf cnf = testing::random_kcnf(60, 256, 3, rng);
    HybridConfig hc;
    hc.solver.random_seed = rng();
    hc.grover_interval = 10;
    hc.extraction.strategy = static_cast<ExtractionStrategy>(i % 4);
    hc.grover.noise_epsilon = (i % 3) * 0.1;
    HybridResult a = solve_hybrid(cnf, hc);
    HybridResult b = solve_hybrid(cnf, hc);
    ++repeats;
    if (!a.result.stats.same_counters(b.result.stats) || a.calls != b.calls) ++differ;
  }
  Outcome o;
  o.pass = repeats > 20 && differ == 0;
  o.detail = fmt("%zu repeated runs (family members x 2 seeds x 2 modes, plus 20 small mixed-config runs); "
                 "differing counters or call records: %zu",
                 repeats, differ);
  return o;
}

}  // namespace

int main() {
  report(1, "verdict equivalence", verdict_equivalence());
  report(2, "worked extraction example", worked_example());
  report(3, "oracle/gadget equivalence", oracle_equivalence());
  report(4, "analytic amplification", analytic_amplification());
  report(5, "BBHT behavior", bbht_behavior());
  report(6, "popcount and gadget oracles", popcount_and_gadgets());
  report(7, "generator end-to-end", generator_end_to_end());
  FamilyRuns fam = run_family();
  report(8, "directional hybrid benefit", directional_benefit(fam));
  report(9, "heuristic-only feedback", heuristic_only(fam));
  report(10, "reproducibility", reproducibility(fam));
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
