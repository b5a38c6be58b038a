#include "qgcl/dimacs.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qgcl {

Literal Literal::from_dimacs(int lit) {
  if (lit == 0) throw std::invalid_argument("literal 0 has no variable");
  return lit > 0 ? Literal(static_cast<std::uint32_t>(lit), true)
                 : Literal(static_cast<std::uint32_t>(-static_cast<long long>(lit)), false);
}

Clause::Clause(std::vector<Literal> lits) {
  lits_.reserve(lits.size());
  for (const Literal& l : lits) {
    if (l.var == 0) throw std::invalid_argument("literal with variable 0");
    if (std::find(lits_.begin(), lits_.end(), l) != lits_.end()) continue;
    if (std::find(lits_.begin(), lits_.end(), ~l) != lits_.end()) tautology_ = true;
    lits_.push_back(l);
  }
}

void Cnf::add_clause(Clause c) {
  for (const Literal& l : c) num_vars = std::max(num_vars, l.var);
  clauses.push_back(std::move(c));
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

bool parse_int(std::string_view tok, long long& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) toks.push_back(line.substr(i, j - i));
    i = j;
  }
  return toks;
}

}  // namespace

Cnf parse_dimacs(std::istream& in) {
  Cnf cnf;
  bool have_header = false;
  long long declared_vars = 0;
  long long declared_clauses = 0;
  std::vector<Literal> pending;
  std::size_t pending_line = 0;
  std::size_t line_no = 0;
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0][0] == 'c') continue;
    if (toks[0] == "%") break;  // SATLIB-style footer
    if (toks[0] == "p") {
      if (have_header) throw ParseError(line_no, "duplicate header");
      if (toks.size() != 4 || toks[1] != "cnf" || !parse_int(toks[2], declared_vars) ||
          !parse_int(toks[3], declared_clauses) || declared_vars < 0 || declared_clauses < 0 ||
          declared_vars > static_cast<long long>(INT32_MAX))
        throw ParseError(line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
      have_header = true;
      cnf.num_vars = static_cast<std::uint32_t>(declared_vars);
      continue;
    }
    if (!have_header) throw ParseError(line_no, "clause data before 'p cnf' header");
    for (std::string_view tok : toks) {
      long long v = 0;
      if (!parse_int(tok, v)) throw ParseError(line_no, "invalid token '" + std::string(tok) + "'");
      if (v == 0) {
        if (static_cast<long long>(cnf.clauses.size()) >= declared_clauses)
          throw ParseError(line_no, "more clauses than declared in header");
        cnf.clauses.emplace_back(std::move(pending));
        pending.clear();
        continue;
      }
      if (std::llabs(v) > declared_vars)
        throw ParseError(line_no, "variable " + std::to_string(std::llabs(v)) + " exceeds declared count " +
                                      std::to_string(declared_vars));
      if (pending.empty()) pending_line = line_no;
      pending.push_back(Literal::from_dimacs(static_cast<int>(v)));
    }
  }
  if (!have_header) throw ParseError(line_no, "missing 'p cnf' header");
  if (!pending.empty()) throw ParseError(pending_line, "clause not terminated by 0");
  if (static_cast<long long>(cnf.clauses.size()) != declared_clauses)
    throw ParseError(line_no, "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                                  std::to_string(cnf.clauses.size()));
  return cnf;
}

Cnf parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

Cnf read_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_dimacs(in);
}

void write_dimacs(const Cnf& cnf, std::ostream& out) {
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const Clause& c : cnf.clauses) {
    for (const Literal& l : c) out << l.to_dimacs() << ' ';
    out << "0\n";
  }
}

std::string write_dimacs(const Cnf& cnf) {
  std::ostringstream out;
  write_dimacs(cnf, out);
  return out.str();
}

bool clause_satisfied(const Clause& c, const Assignment& assignment) {
  return std::any_of(c.begin(), c.end(), [&](const Literal& l) { return l.satisfied_by(assignment[l.var - 1]); });
}

Evaluation eval_assignment(std::span<const Clause> clauses, const Assignment& assignment) {
  Evaluation ev;
  ev.violated.total = clauses.size();
  for (const Clause& c : clauses) {
    for (const Literal& l : c)
      if (l.var > assignment.size()) throw std::invalid_argument("clause variable outside assignment");
    if (!clause_satisfied(c, assignment)) ++ev.violated.violated;
  }
  ev.satisfied = ev.violated.violated == 0;
  return ev;
}

Evaluation eval_assignment(const Cnf& cnf, const Assignment& assignment) {
  if (assignment.size() != cnf.num_vars)
    throw std::invalid_argument("assignment length " + std::to_string(assignment.size()) + " != num_vars " +
                                std::to_string(cnf.num_vars));
  return eval_assignment(std::span<const Clause>(cnf.clauses), assignment);
}

}  // namespace qgcl
