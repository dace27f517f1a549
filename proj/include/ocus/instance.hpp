#pragma once

// Instance files, the Sudoku encoder and planted random instances.
//
// Instance grammar (one directive per line, '#' or 'c ' starts a comment):
//
//   name <identifier>
//   vars <n>
//   group <name> <weight>            declares a constraint group
//   init <lit>* 0                     initial interpretation
//   expect-end <lit>* 0               optional: expected maximal consequence
//   expect-costs <cost>*              optional: expected step costs
//   w <weight|-> <group|-> <lit>+ 0   weighted / grouped clause
//   <lit>+ 0                          clause with the default weight
//
// A clause weight of '-' falls back to its group's weight, then to the cost
// policy (60 for ungrouped constraints).

#include <ocus/explain.hpp>

#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

namespace ocus {

class ParseError : public InvalidInputError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : InvalidInputError("line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

struct InstanceClause {
  Clause clause;
  std::optional<std::int64_t> weight;
  std::string group;  // empty when ungrouped

  bool operator==(const InstanceClause&) const = default;
};

struct InstanceFile {
  std::string name;
  int vars = 0;
  std::vector<std::pair<std::string, std::int64_t>> groups;
  std::vector<InstanceClause> clauses;
  Interpretation init;
  std::optional<Interpretation> expect_end;
  std::optional<std::vector<std::int64_t>> expect_costs;

  bool operator==(const InstanceFile&) const = default;

  std::optional<std::int64_t> group_weight(const std::string& g) const {
    for (const auto& [name, w] : groups)
      if (name == g) return w;
    return std::nullopt;
  }

  // Constraints with their effective weights.
  std::vector<WeightedClause> constraints(const CostPolicy& policy = {}) const {
    std::vector<WeightedClause> out;
    out.reserve(clauses.size());
    for (const auto& c : clauses) {
      Weight w = c.group.empty() ? policy.constraint : policy.group;
      if (c.weight)
        w = *c.weight;
      else if (auto gw = group_weight(c.group))
        w = *gw;
      out.push_back({c.clause, w});
    }
    return out;
  }
};

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back({line.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

class LineParser {
 public:
  LineParser(std::size_t line, std::vector<Token> toks) : line_(line), toks_(std::move(toks)) {}

  bool done() const { return pos_ >= toks_.size(); }
  const Token& peek() const { return toks_.at(pos_); }

  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t col = done() ? (toks_.empty() ? 1 : toks_.back().column + toks_.back().text.size())
                             : toks_[pos_].column;
    throw ParseError(line_, col, msg);
  }

  std::string_view word(const char* what) {
    if (done()) fail(std::string("expected ") + what);
    return toks_[pos_++].text;
  }

  std::int64_t integer(const char* what) {
    if (done()) fail(std::string("expected ") + what);
    std::string_view t = toks_[pos_].text;
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
      fail(std::string("expected ") + what + ", got '" + std::string(t) + "'");
    ++pos_;
    return v;
  }

  // Literals up to a terminating 0.
  std::vector<Literal> literals(int vars) {
    std::vector<Literal> lits;
    for (;;) {
      if (done()) fail("missing terminating 0");
      std::size_t at = pos_;
      std::int64_t v = integer("literal");
      if (v == 0) break;
      if (vars > 0 && std::abs(v) > vars) {
        pos_ = at;
        fail("literal " + std::to_string(v) + " references an undeclared variable");
      }
      if (vars <= 0) {
        pos_ = at;
        fail("'vars' must be declared before literals");
      }
      lits.push_back(Literal::from_dimacs(static_cast<int>(v)));
    }
    return lits;
  }

  void end() {
    if (!done()) fail("unexpected trailing token '" + std::string(peek().text) + "'");
  }

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline bool is_integer_token(std::string_view t) {
  if (t.empty()) return false;
  std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  if (i >= t.size()) return false;
  for (; i < t.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  return true;
}

}  // namespace detail

inline InstanceFile parse_instance(std::istream& in) {
  InstanceFile inst;
  std::string raw;
  std::size_t lineno = 0;
  bool seen_vars = false, seen_init = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = detail::tokenize(line);
    if (toks.empty() || toks[0].text == "c") continue;
    detail::LineParser p(lineno, toks);
    const std::string_view key = p.peek().text;
    auto positive = [&](std::int64_t w) {
      if (w <= 0) p.fail("weights must be positive");
      return w;
    };
    try {
      if (key == "name") {
        p.word("key");
        inst.name = std::string(p.word("name"));
        p.end();
      } else if (key == "vars") {
        p.word("key");
        if (seen_vars) p.fail("duplicate 'vars'");
        std::int64_t n = p.integer("variable count");
        if (n < 0 || n > (1 << 26)) p.fail("variable count out of range");
        inst.vars = static_cast<int>(n);
        seen_vars = true;
        p.end();
      } else if (key == "group") {
        p.word("key");
        std::string g(p.word("group name"));
        if (g == "-") p.fail("'-' is not a valid group name");
        if (inst.group_weight(g)) p.fail("duplicate group '" + g + "'");
        inst.groups.emplace_back(g, positive(p.integer("group weight")));
        p.end();
      } else if (key == "init") {
        p.word("key");
        if (seen_init) p.fail("duplicate 'init'");
        inst.init = Interpretation(p.literals(inst.vars));
        seen_init = true;
        p.end();
      } else if (key == "expect-end") {
        p.word("key");
        inst.expect_end = Interpretation(p.literals(inst.vars));
        p.end();
      } else if (key == "expect-costs") {
        p.word("key");
        std::vector<std::int64_t> costs;
        while (!p.done()) costs.push_back(p.integer("cost"));
        inst.expect_costs = std::move(costs);
      } else if (key == "w") {
        p.word("key");
        InstanceClause c;
        if (p.done()) p.fail("expected weight or '-'");
        if (p.peek().text == "-")
          p.word("weight");
        else
          c.weight = positive(p.integer("weight or '-'"));
        std::string_view g = p.word("group or '-'");
        if (g != "-") {
          if (!inst.group_weight(std::string(g))) p.fail("undeclared group '" + std::string(g) + "'");
          c.group = std::string(g);
        }
        auto lits = p.literals(inst.vars);
        if (lits.empty()) p.fail("empty clause");
        c.clause = Clause(std::move(lits));
        inst.clauses.push_back(std::move(c));
        p.end();
      } else if (detail::is_integer_token(key)) {
        auto lits = p.literals(inst.vars);
        if (lits.empty()) p.fail("empty clause");
        inst.clauses.push_back({Clause(std::move(lits)), std::nullopt, {}});
        p.end();
      } else {
        p.fail("unknown directive '" + std::string(key) + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const InvalidInputError& e) {
      throw ParseError(lineno, toks[0].column, e.what());
    }
  }
  if (!seen_vars) throw ParseError(lineno + 1, 1, "missing 'vars' declaration");
  return inst;
}

inline InstanceFile parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_instance(in);
}

inline InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open instance file '" + path + "'");
  return parse_instance(in);
}

inline std::string serialize(const InstanceFile& inst) {
  std::ostringstream os;
  auto lits = [&](auto&& range) {
    for (Literal l : range) os << ' ' << l.dimacs();
    os << " 0";
  };
  if (!inst.name.empty()) os << "name " << inst.name << '\n';
  os << "vars " << inst.vars << '\n';
  for (const auto& [g, w] : inst.groups) os << "group " << g << ' ' << w << '\n';
  os << "init";
  lits(inst.init);
  os << '\n';
  if (inst.expect_end) {
    os << "expect-end";
    lits(*inst.expect_end);
    os << '\n';
  }
  if (inst.expect_costs) {
    os << "expect-costs";
    for (auto c : *inst.expect_costs) os << ' ' << c;
    os << '\n';
  }
  for (const auto& c : inst.clauses) {
    if (c.weight || !c.group.empty()) {
      os << "w " << (c.weight ? std::to_string(*c.weight) : "-") << ' '
         << (c.group.empty() ? "-" : c.group);
      lits(c.clause.literals());
    } else {
      bool first = true;
      for (Literal l : c.clause.literals()) {
        os << (first ? "" : " ") << l.dimacs();
        first = false;
      }
      os << " 0";
    }
    os << '\n';
  }
  return os.str();
}

inline void save_instance(const InstanceFile& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write instance file '" + path + "'");
  out << serialize(inst);
}

// ---------------------------------------------------------------------------
// Sudoku

struct SudokuGrid {
  int n = 0;
  std::vector<int> cells;  // row-major, 0 = empty, else 1..n

  int at(int r, int c) const { return cells.at(static_cast<std::size_t>(r * n + c)); }
};

// Whitespace-separated digits, '0' or '.' for an empty cell; '#' comments.
inline SudokuGrid parse_grid(std::istream& in) {
  std::vector<int> cells;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    for (const auto& t : detail::tokenize(line)) {
      if (t.text == ".") {
        cells.push_back(0);
        continue;
      }
      int v = 0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc() || p != t.text.data() + t.text.size() || v < 0)
        throw ParseError(lineno, t.column, "expected a cell value, got '" + std::string(t.text) + "'");
      cells.push_back(v);
    }
  }
  int n = 0;
  for (int k : {4, 9})
    if (cells.size() == static_cast<std::size_t>(k * k)) n = k;
  if (n == 0)
    throw InvalidInputError("a grid needs 16 (4x4) or 81 (9x9) cells, got " +
                            std::to_string(cells.size()));
  for (int v : cells)
    if (v > n) throw InvalidInputError("cell value " + std::to_string(v) + " exceeds " + std::to_string(n));
  return {n, std::move(cells)};
}

inline SudokuGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open grid file '" + path + "'");
  return parse_grid(in);
}

// Variable for "cell (r, c) holds digit d" with 0-based r, c, d.
inline int sudoku_var(int n, int r, int c, int d) { return r * n * n + c * n + d + 1; }

// CNF with one variable per (cell, digit): every cell takes a value, at most
// one value per cell, and all-different rows, columns and boxes as pairwise
// exclusions. All clauses weigh 60; the givens form the initial
// interpretation.
inline InstanceFile encode_sudoku(const SudokuGrid& g, const std::string& name = "sudoku") {
  const int n = g.n;
  if (n != 4 && n != 9) throw InvalidInputError("only 4x4 and 9x9 grids are supported");
  if (g.cells.size() != static_cast<std::size_t>(n * n))
    throw InvalidInputError("grid has the wrong number of cells");
  const int b = n == 4 ? 2 : 3;
  InstanceFile inst;
  inst.name = name;
  inst.vars = n * n * n;
  auto add = [&](std::vector<Literal> lits) {
    inst.clauses.push_back({Clause(std::move(lits)), 60, {}});
  };
  auto pos = [&](int r, int c, int d) { return Literal(sudoku_var(n, r, c, d), true); };
  auto neg = [&](int r, int c, int d) { return Literal(sudoku_var(n, r, c, d), false); };

  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      std::vector<Literal> some;
      for (int d = 0; d < n; ++d) some.push_back(pos(r, c, d));
      add(std::move(some));
      for (int d = 0; d < n; ++d)
        for (int e = d + 1; e < n; ++e) add({neg(r, c, d), neg(r, c, e)});
    }
  // Units: rows, columns, boxes as cell lists.
  std::vector<std::vector<std::pair<int, int>>> units;
  for (int r = 0; r < n; ++r) {
    units.emplace_back();
    for (int c = 0; c < n; ++c) units.back().emplace_back(r, c);
  }
  for (int c = 0; c < n; ++c) {
    units.emplace_back();
    for (int r = 0; r < n; ++r) units.back().emplace_back(r, c);
  }
  for (int br = 0; br < n; br += b)
    for (int bc = 0; bc < n; bc += b) {
      units.emplace_back();
      for (int r = br; r < br + b; ++r)
        for (int c = bc; c < bc + b; ++c) units.back().emplace_back(r, c);
    }
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto& unit = units[u];
    const bool box = u >= static_cast<std::size_t>(2 * n);
    for (std::size_t i = 0; i < unit.size(); ++i)
      for (std::size_t j = i + 1; j < unit.size(); ++j) {
        auto [r1, c1] = unit[i];
        auto [r2, c2] = unit[j];
        // Box pairs sharing a row or column are already covered.
        if (box && (r1 == r2 || c1 == c2)) continue;
        for (int d = 0; d < n; ++d) add({neg(r1, c1, d), neg(r2, c2, d)});
      }
    // Givens must not repeat within a unit.
    std::vector<int> seen(n + 1, 0);
    for (auto [r, c] : unit) {
      int v = g.at(r, c);
      if (v != 0 && seen[v]++)
        throw ContradictionError("digit " + std::to_string(v) + " is given twice in one unit");
    }
  }
  std::vector<Literal> givens;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (int v = g.at(r, c)) givens.push_back(pos(r, c, v - 1));
  inst.init = Interpretation(std::move(givens));
  return inst;
}

// ---------------------------------------------------------------------------
// Planted random instances

struct PlantedOptions {
  int vars = 12;
  int clauses = 40;
  int clause_size = 3;
  int givens = 3;
  // Fraction of clauses placed in the instance-specific weight-100 group.
  double group_fraction = 0.3;
};

// Random clauses all satisfied by a hidden assignment, so the instance is
// satisfiable; the initial interpretation is drawn from that assignment.
inline InstanceFile make_planted_instance(std::uint64_t seed, const PlantedOptions& o = {}) {
  if (o.vars < 1 || o.clause_size < 1 || o.clause_size > o.vars)
    throw InvalidInputError("invalid planted-instance options");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5), grouped(o.group_fraction);
  std::vector<bool> hidden(o.vars + 1);
  for (int v = 1; v <= o.vars; ++v) hidden[v] = coin(rng);

  InstanceFile inst;
  inst.name = "planted-" + std::to_string(seed);
  inst.vars = o.vars;
  inst.groups.emplace_back("specific", 100);
  std::vector<int> vars(o.vars);
  std::iota(vars.begin(), vars.end(), 1);
  while (static_cast<int>(inst.clauses.size()) < o.clauses) {
    std::shuffle(vars.begin(), vars.end(), rng);
    std::vector<Literal> lits;
    bool satisfied = false;
    for (int k = 0; k < o.clause_size; ++k) {
      Literal l(vars[k], coin(rng));
      satisfied |= l.positive() == hidden[l.var()];
      lits.push_back(l);
    }
    if (!satisfied) continue;
    InstanceClause c{Clause(std::move(lits)), std::nullopt, {}};
    if (grouped(rng)) c.group = "specific";
    inst.clauses.push_back(std::move(c));
  }
  std::shuffle(vars.begin(), vars.end(), rng);
  std::vector<Literal> given;
  for (int k = 0; k < std::min(o.givens, o.vars); ++k) given.emplace_back(vars[k], hidden[vars[k]]);
  inst.init = Interpretation(std::move(given));
  return inst;
}

}  // namespace ocus
