#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qgcl {

/// A variable (1-based, DIMACS numbering) together with its polarity.
struct Literal {
  std::uint32_t var = 0;
  bool positive = true;

  constexpr Literal() = default;
  constexpr Literal(std::uint32_t v, bool pos) : var(v), positive(pos) {}

  static Literal from_dimacs(int lit);
  int to_dimacs() const { return positive ? static_cast<int>(var) : -static_cast<int>(var); }

  constexpr Literal operator~() const { return Literal(var, !positive); }
  /// True when the literal evaluates to true under `value` for its variable.
  constexpr bool satisfied_by(bool value) const { return value == positive; }

  friend constexpr bool operator==(const Literal&, const Literal&) = default;
  friend constexpr auto operator<=>(const Literal&, const Literal&) = default;
};

inline constexpr Literal pos(std::uint32_t v) { return {v, true}; }
inline constexpr Literal neg(std::uint32_t v) { return {v, false}; }

/// Disjunction of literals. Duplicates are removed on construction (first
/// occurrence wins); a clause holding both x and -x is kept but flagged.
class Clause {
 public:
  Clause() = default;
  explicit Clause(std::vector<Literal> lits);
  Clause(std::initializer_list<Literal> lits) : Clause(std::vector<Literal>(lits)) {}

  std::span<const Literal> literals() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  bool is_tautology() const { return tautology_; }
  const Literal& operator[](std::size_t i) const { return lits_[i]; }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }

  friend bool operator==(const Clause& a, const Clause& b) { return a.lits_ == b.lits_; }

 private:
  std::vector<Literal> lits_;
  bool tautology_ = false;
};

struct Cnf {
  std::uint32_t num_vars = 0;
  std::vector<Clause> clauses;

  std::size_t num_clauses() const { return clauses.size(); }
  /// Appends a clause, growing num_vars to cover its variables.
  void add_clause(Clause c);

  friend bool operator==(const Cnf&, const Cnf&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

Cnf parse_dimacs(std::istream& in);
Cnf parse_dimacs(std::string_view text);
Cnf read_dimacs_file(const std::string& path);

std::string write_dimacs(const Cnf& cnf);
void write_dimacs(const Cnf& cnf, std::ostream& out);

/// Full assignment; element i holds the value of variable i+1.
using Assignment = std::vector<bool>;

/// Exact fraction of clauses falsified by an assignment.
struct ViolationFraction {
  std::size_t violated = 0;
  std::size_t total = 0;

  double value() const { return total == 0 ? 0.0 : static_cast<double>(violated) / static_cast<double>(total); }
  friend bool operator==(const ViolationFraction&, const ViolationFraction&) = default;
};

struct Evaluation {
  bool satisfied = true;
  ViolationFraction violated;
};

/// Evaluates a full assignment; `assignment[i]` is the value of variable i+1.
/// Throws std::invalid_argument when the length differs from num_vars.
Evaluation eval_assignment(const Cnf& cnf, const Assignment& assignment);
Evaluation eval_assignment(std::span<const Clause> clauses, const Assignment& assignment);

bool clause_satisfied(const Clause& c, const Assignment& assignment);

}  // namespace qgcl
