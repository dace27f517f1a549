#include "brute_force.hpp"

#include <ocus/instance.hpp>

#include <filesystem>
#include <gtest/gtest.h>

using namespace ocus;

namespace {

ParseError parse_error(std::string_view text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return ParseError(0, 0, "");
}

}  // namespace

TEST(Instance, ParsesRunningExample) {
  InstanceFile inst = load_instance(OCUS_FIXTURES "/running_example.inst");
  EXPECT_EQ(inst.name, "running-example");
  EXPECT_EQ(inst.vars, 3);
  EXPECT_TRUE(inst.init.empty());
  ASSERT_EQ(inst.clauses.size(), 4u);
  ASSERT_TRUE(inst.expect_end.has_value());
  EXPECT_EQ(*inst.expect_end, Interpretation::from_dimacs({1, -2, 3}));
  ASSERT_TRUE(inst.expect_costs.has_value());
  EXPECT_EQ(*inst.expect_costs, (std::vector<std::int64_t>{101, 122, 102}));
  auto cs = inst.constraints();
  ASSERT_EQ(cs.size(), 4u);
  EXPECT_EQ(cs[0].weight, Weight(60));
  EXPECT_EQ(cs[2].weight, Weight(100));
  EXPECT_EQ(cs[2].clause, Clause::from_dimacs({1}));
}

TEST(Instance, DefaultWeightComesFromPolicy) {
  InstanceFile inst = parse_instance("vars 2\ninit 0\n1 2 0\n");
  EXPECT_EQ(inst.constraints()[0].weight, Weight(60));
  CostPolicy p;
  p.constraint = 7;
  EXPECT_EQ(inst.constraints(p)[0].weight, Weight(7));
}

TEST(Instance, CommentsAndBlankLinesAreIgnored) {
  InstanceFile inst = parse_instance("# header\nc another\n\nvars 2\ninit 1 0\n  # indented\n-1 2 0\n");
  EXPECT_EQ(inst.clauses.size(), 1u);
  EXPECT_EQ(inst.init, Interpretation::from_dimacs({1}));
}

TEST(Instance, ErrorsCarryLineAndColumn) {
  ParseError e = parse_error("vars 2\ninit 0\n1 -3 0\n");
  EXPECT_EQ(e.line(), 3u);
  EXPECT_EQ(e.column(), 3u);

  e = parse_error("vars 2\ninit 0\n1 2\n");  // missing terminator
  EXPECT_EQ(e.line(), 3u);

  e = parse_error("vars x\n");
  EXPECT_EQ(e.line(), 1u);
  EXPECT_EQ(e.column(), 6u);

  e = parse_error("vars 2\ninit 0\nw 5 nogroup 1 0\n");
  EXPECT_EQ(e.line(), 3u);

  e = parse_error("vars 2\ninit 0\n1 -1 0\n");  // tautology
  EXPECT_EQ(e.line(), 3u);

  e = parse_error("vars 2\ninit 1 -1 0\n");  // inconsistent init
  EXPECT_EQ(e.line(), 2u);

  e = parse_error("init 0\n");  // no 'vars' anywhere
  EXPECT_EQ(e.line(), 2u);
}

TEST(Instance, MissingVarsIsAnError) { EXPECT_THROW(parse_instance("init 0\n1 0\n"), ParseError); }

TEST(Instance, UnreadableFileIsInputError) {
  EXPECT_THROW(load_instance("/nonexistent/file.inst"), InvalidInputError);
}

TEST(Instance, SerializeRoundTrips) {
  for (const char* name : {"/running_example.inst", "/synthetic/planted_002.inst"}) {
    InstanceFile inst = load_instance(std::string(OCUS_FIXTURES) + name);
    EXPECT_EQ(parse_instance(serialize(inst)), inst) << name;
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    InstanceFile inst = make_planted_instance(seed);
    EXPECT_EQ(parse_instance(serialize(inst)), inst);
  }
  InstanceFile sudoku = encode_sudoku(load_grid(OCUS_FIXTURES "/sudoku/s4_00_g6.grid"));
  EXPECT_EQ(parse_instance(serialize(sudoku)), sudoku);
}

TEST(Instance, SaveAndLoad) {
  InstanceFile inst = make_planted_instance(3);
  auto path = std::filesystem::temp_directory_path() / "ocus_instance_test.inst";
  save_instance(inst, path.string());
  EXPECT_EQ(load_instance(path.string()), inst);
  std::filesystem::remove(path);
}

TEST(Planted, InstancesAreSatisfiableAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    InstanceFile a = make_planted_instance(seed), b = make_planted_instance(seed);
    EXPECT_EQ(a, b);
    std::vector<Clause> cs;
    for (const auto& c : a.clauses) cs.push_back(c.clause);
    EXPECT_TRUE(brute::consequences(cs, a.init, a.vars).has_value());
  }
}

TEST(Sudoku, GridParsing) {
  std::istringstream in("4 . 3 .\n3 . . 1\n1 . . 3\n. . . .\n");
  SudokuGrid g = parse_grid(in);
  EXPECT_EQ(g.n, 4);
  EXPECT_EQ(g.cells, (std::vector<int>{4, 0, 3, 0, 3, 0, 0, 1, 1, 0, 0, 3, 0, 0, 0, 0}));
  std::istringstream bad("1 2 3\n");
  EXPECT_THROW(parse_grid(bad), InvalidInputError);
  std::istringstream out_of_range("5 . . .\n. . . .\n. . . .\n. . . .\n");
  EXPECT_THROW(parse_grid(out_of_range), InvalidInputError);
}

TEST(Sudoku, EncodingMatchesSolverOnFixtures) {
  for (const auto& entry : std::filesystem::directory_iterator(OCUS_FIXTURES "/sudoku")) {
    SudokuGrid g = load_grid(entry.path().string());
    std::vector<int> solution;
    ASSERT_EQ(brute::sudoku_solutions(g.cells, &solution), 1u) << entry.path();
    InstanceFile inst = encode_sudoku(g);
    std::vector<Clause> cs;
    for (const auto& c : inst.clauses) cs.push_back(c.clause);
    Interpretation end = propagate(std::span<const Clause>(cs), inst.init);
    // The maximal consequence fixes every cell to the unique solution.
    EXPECT_EQ(end.size(), static_cast<std::size_t>(inst.vars)) << entry.path();
    for (int k = 0; k < 16; ++k)
      EXPECT_TRUE(end.contains(Literal(sudoku_var(4, k / 4, k % 4, solution[k] - 1), true)));
  }
}

TEST(Sudoku, EmptyGridHasNoForcedLiterals) {
  SudokuGrid g{4, std::vector<int>(16, 0)};
  InstanceFile inst = encode_sudoku(g);
  std::vector<Clause> cs;
  for (const auto& c : inst.clauses) cs.push_back(c.clause);
  EXPECT_TRUE(propagate(std::span<const Clause>(cs), inst.init).empty());
}

TEST(Sudoku, ConflictingGivensAreContradiction) {
  SudokuGrid g{4, std::vector<int>(16, 0)};
  g.cells[0] = 1;
  g.cells[1] = 1;
  EXPECT_THROW(encode_sudoku(g), ContradictionError);
}

TEST(Sudoku, UnsupportedSize) {
  SudokuGrid g{3, std::vector<int>(9, 0)};
  EXPECT_THROW(encode_sudoku(g), InvalidInputError);
}
