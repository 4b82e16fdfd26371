#include "doctest.h"

#include <set>

#include "andor/complexity.hpp"
#include "andor/trimming.hpp"

using namespace andor;

TEST_CASE("shape enumeration counts are the little Schroeder numbers") {
  std::vector<std::size_t> expect{0, 1, 1, 3, 11, 45, 197};
  for (int m = 1; m <= 6; ++m) {
    auto shapes = enumerate_shapes(m);
    CHECK(shapes.size() == expect[m]);
    std::set<std::string> keys;
    for (const auto& s : shapes) {
      s.validate();
      CHECK(size(s) == m);
      keys.insert(shape_key(s));
    }
    CHECK(keys.size() == shapes.size());  // all distinct
  }
  CHECK_THROWS_AS(enumerate_shapes(0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_shapes(9), std::invalid_argument);
}

TEST_CASE("three-leaf shapes are the star and the two cherries") {
  auto shapes = enumerate_shapes(3);
  std::set<std::string> keys;
  for (const auto& s : shapes) keys.insert(shape_key(s));
  CHECK(keys == std::set<std::string>{"(***)", "(*(**))", "((**)*)"});
}

TEST_CASE("complexity values at k = 2") {
  ComplexityTable table(2, 4);
  BoolFn x1 = BoolFn::literal(2, 1, false), x2 = BoolFn::literal(2, 2, false);
  CHECK(table.complexity(BoolFn::constant(2, true)) == 0);
  CHECK(table.complexity(BoolFn::constant(2, false)) == 0);
  CHECK(table.complexity(x1) == 1);
  CHECK(table.complexity(~x2) == 1);
  CHECK(table.complexity(x1 & x2) == 2);
  CHECK(table.complexity(x1 | x2) == 2);
  CHECK(table.complexity(x1 ^ x2) == 4);
  CHECK(table.complexity(~(x1 ^ x2)) == 4);
  CHECK(table.function_count() == 16);
  BoolFn odd(2);
  odd.set_bit(0, true);
  CHECK(table.contains(odd));
}

TEST_CASE("the three-variable disjunction has complexity 3") {
  ComplexityTable table(3, 3);
  BoolFn f = BoolFn::literal(3, 1, false) | BoolFn::literal(3, 2, false) |
             BoolFn::literal(3, 3, true);
  CHECK(table.complexity(f) == 3);
}

TEST_CASE("read-once detection") {
  ComplexityTable table(2, 4);
  BoolFn x1 = BoolFn::literal(2, 1, false), x2 = BoolFn::literal(2, 2, false);
  CHECK(table.is_read_once(x1 & x2));
  CHECK_FALSE(table.is_read_once(x1 ^ x2));  // L = 4 > Ess = 2
  CHECK_FALSE(table.is_read_once(BoolFn::constant(2, true)));
  CHECK_THROWS_AS(table.complexity(BoolFn::constant(3, true).extend(3)),
                  std::out_of_range);
}

TEST_CASE("orbit sizes under variable permutations") {
  CHECK(orbit_size(BoolFn::constant(3, false), 3) == 1);
  CHECK(orbit_size(BoolFn::literal(1, 1, false), 3) == 3);
  BoolFn and2 = BoolFn::literal(2, 1, false) & BoolFn::literal(2, 2, false);
  CHECK(orbit_size(and2, 4) == 6);  // binom(4, 2)
  CHECK_THROWS_AS(orbit_size(and2, 9), std::invalid_argument);

  // orbits are at least as large as the choice of essential-variable sets
  auto binom = [](int n, int r) {
    std::uint64_t v = 1;
    for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
    return v;
  };
  Rng rng(67);
  for (int rep = 0; rep < 20; ++rep) {
    BoolFn f(4);
    for (std::uint64_t a = 0; a < 16; ++a) f.set_bit(a, rng.coin());
    CHECK(orbit_size(f, 4) >= binom(4, f.essential_count()));
  }
}

TEST_CASE("table invariants") {
  ComplexityTable table(2, 4);
  for (const auto& [f, entry] : table.entries()) {
    CHECK(table.complexity(~f) == entry.complexity);  // negation symmetry
    if (!f.is_constant()) {
      CHECK(entry.complexity >= f.essential_count());
      AndOrTree witness = parse(entry.witness);
      CHECK(size(witness) == entry.complexity);
      CHECK(eval_tree(witness, 2) == f);
      // minimal witnesses cannot shrink under trimming
      CHECK(trim_size(trim(witness)) == entry.complexity);
    }
  }
}

TEST_CASE("table matches a direct enumeration of labelled trees") {
  // reachable-function sets per size: no shape/labelling factorization
  const int k = 2;
  std::vector<std::set<BoolFn>> reach(4);
  for (int var = 1; var <= k; ++var)
    for (int neg = 0; neg <= 1; ++neg) reach[1].insert(BoolFn::literal(k, var, neg));
  for (int m = 2; m <= 3; ++m) {
    std::set<BoolFn> acc;
    for (int first = 1; first < m; ++first) {
      // first child size, remainder built as (r-1)-ary tail of the same gate;
      // associativity makes the flat fold equivalent to any arity split
      for (const BoolFn& a : reach[first])
        for (const BoolFn& b : reach[m - first]) {
          acc.insert(a & b);
          acc.insert(a | b);
        }
    }
    reach[m] = acc;
  }
  ComplexityTable table(k, 3);
  std::map<BoolFn, int> oracle;
  oracle[BoolFn::constant(k, true)] = 0;
  oracle[BoolFn::constant(k, false)] = 0;
  for (int m = 1; m <= 3; ++m)
    for (const BoolFn& f : reach[m]) oracle.try_emplace(f, m);
  CHECK(oracle.size() == table.function_count());
  for (const auto& [f, entry] : table.entries()) {
    REQUIRE(oracle.count(f) == 1);
    CHECK(oracle[f] == entry.complexity);
  }
}

TEST_CASE("cost guards") {
  CHECK_THROWS_AS(ComplexityTable(4, 4), std::invalid_argument);
  CHECK_THROWS_AS(ComplexityTable(2, 7), std::invalid_argument);
}

TEST_CASE("table construction is independent of the worker count") {
  CHECK(ComplexityTable(2, 4, 1).to_csv() == ComplexityTable(2, 4, 3).to_csv());
}

TEST_CASE("csv export shape") {
  ComplexityTable table(2, 2);
  std::string csv = table.to_csv();
  CHECK(csv.rfind("fn,L,Ess,read_once,witness\n", 0) == 0);
  CHECK(csv.find("2:A,1,1,1,") != std::string::npos);  // x1 is read-once
}
