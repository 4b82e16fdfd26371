#include "doctest.h"

#include <stdexcept>

#include "andor/boolfn.hpp"
#include "andor/rng.hpp"

using namespace andor;

namespace {
BoolFn random_fn(int k, Rng& rng) {
  BoolFn f(k);
  for (std::uint64_t a = 0; a < f.table_bits(); ++a) f.set_bit(a, rng.coin());
  return f;
}
}  // namespace

TEST_CASE("eval at assignments") {
  BoolFn and2 = BoolFn::literal(2, 1, false) & BoolFn::literal(2, 2, false);
  CHECK(and2.eval({1, 1}) == true);
  CHECK(and2.eval({1, 0}) == false);
  CHECK(BoolFn::constant(3, true).eval({0, 1, 0}) == true);
  BoolFn xor2 = BoolFn::literal(2, 1, false) ^ BoolFn::literal(2, 2, false);
  CHECK(xor2.eval({1, 0}) == true);
  CHECK_THROWS_AS(and2.eval({1, 0, 1}), std::invalid_argument);
}

TEST_CASE("combine basics") {
  BoolFn x1 = BoolFn::literal(2, 1, false);
  BoolFn nx1 = BoolFn::literal(2, 1, true);
  CHECK((x1 | nx1) == BoolFn::constant(2, true));
  Rng rng(7);
  BoolFn f = random_fn(3, rng);
  CHECK((f & BoolFn::constant(3, true)) == f);
  BoolFn x2 = BoolFn::literal(2, 2, false);
  CHECK(~(x1 | x2) == (~x1 & ~x2));  // De Morgan
  BoolFn g(2);
  CHECK_THROWS_AS(f & g, std::invalid_argument);
  CHECK(combine(Connective::And, x1, &x2) == (x1 & x2));
  CHECK(combine(Connective::Not, x1) == nx1);
}

TEST_CASE("combine is pointwise-consistent with eval") {
  Rng rng(21);
  for (int k = 1; k <= 4; ++k) {
    BoolFn f = random_fn(k, rng), g = random_fn(k, rng);
    BoolFn fa = f & g, fo = f | g, fn = ~f;
    for (std::uint64_t a = 0; a < f.table_bits(); ++a) {
      CHECK(fa.bit(a) == (f.bit(a) && g.bit(a)));
      CHECK(fo.bit(a) == (f.bit(a) || g.bit(a)));
      CHECK(fn.bit(a) == !f.bit(a));
    }
  }
}

TEST_CASE("essential variables") {
  CHECK(BoolFn::constant(4, true).essential_vars().empty());
  BoolFn f = BoolFn::literal(3, 1, false) | BoolFn::literal(3, 2, false) |
             BoolFn::literal(3, 3, true);
  CHECK(f.essential_vars() == std::set<int>{1, 2, 3});
  CHECK(BoolFn::literal(5, 1, false).essential_vars() == std::set<int>{1});
}

TEST_CASE("restrict") {
  BoolFn x1 = BoolFn::literal(2, 1, false), x2 = BoolFn::literal(2, 2, false);
  BoolFn and2 = x1 & x2;
  CHECK(and2.restrict(1, true) == x2);
  CHECK(and2.restrict(1, false) == BoolFn::constant(2, false));
  BoolFn xor2 = x1 ^ x2;
  CHECK(xor2.restrict(2, true) == ~x1);
  CHECK_THROWS_AS(and2.restrict(3, true), std::invalid_argument);
  CHECK_THROWS_AS(and2.restrict(0, true), std::invalid_argument);
}

TEST_CASE("extend") {
  BoolFn x1 = BoolFn::literal(1, 1, false);
  CHECK(x1.extend(3) == BoolFn::literal(3, 1, false));
  CHECK(BoolFn::constant(1, true).extend(4) == BoolFn::constant(4, true));
  BoolFn xor2 = BoolFn::literal(2, 1, false) ^ BoolFn::literal(2, 2, false);
  CHECK(xor2.extend(6).essential_count() == 2);
  CHECK_THROWS_AS(xor2.extend(1), std::invalid_argument);
}

TEST_CASE("extend then restrict is the identity") {
  Rng rng(33);
  for (int rep = 0; rep < 20; ++rep) {
    BoolFn f = random_fn(3, rng);
    BoolFn g = f.extend(6);
    for (int var = 6; var > 3; --var) g = g.restrict(var, rng.coin());
    for (std::uint64_t a = 0; a < g.table_bits(); ++a)
      CHECK(g.bit(a) == f.bit(a & 7));
  }
}

TEST_CASE("essential-variable invariants") {
  Rng rng(55);
  for (int rep = 0; rep < 30; ++rep) {
    BoolFn f = random_fn(4, rng);
    CHECK((~f).essential_vars() == f.essential_vars());
    int var = 1 + static_cast<int>(rng.below(4));
    auto ess = f.restrict(var, rng.coin()).essential_vars();
    auto full = f.essential_vars();
    CHECK(ess.count(var) == 0);
    for (int v : ess) CHECK(full.count(v) == 1);
  }
}

TEST_CASE("canonical text form") {
  CHECK(BoolFn::literal(2, 1, false).to_text() == "2:A");
  CHECK(BoolFn::literal(1, 1, false).to_text() == "1:2");
  CHECK(BoolFn::constant(2, true).to_text() == "2:F");
  CHECK(BoolFn::from_text("2:A") == BoolFn::literal(2, 1, false));
  Rng rng(77);
  for (int rep = 0; rep < 20; ++rep) {
    int k = 1 + static_cast<int>(rng.below(8));
    BoolFn f = random_fn(k, rng);
    CHECK(BoolFn::from_text(f.to_text()) == f);
  }
  CHECK_THROWS_AS(BoolFn::from_text("2:GG"), std::invalid_argument);
  CHECK_THROWS_AS(BoolFn::from_text("noarity"), std::invalid_argument);
}

TEST_CASE("permutations and arity bounds") {
  BoolFn x1 = BoolFn::literal(3, 1, false);
  CHECK(x1.permute_vars({2, 1, 3}) == BoolFn::literal(3, 2, false));
  CHECK_THROWS_AS(BoolFn(0), std::invalid_argument);
  CHECK_THROWS_AS(BoolFn(17), std::invalid_argument);
  CHECK(BoolFn(16).table_bits() == 65536);
}
