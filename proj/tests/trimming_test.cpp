#include "doctest.h"

#include "andor/complexity.hpp"
#include "andor/treegen.hpp"
#include "andor/trimming.hpp"

using namespace andor;

TEST_CASE("tautological group trims to a bare gate leaf") {
  TrimmedTree t = trim(parse("(x1|~x1|x2)"));
  CHECK(trim_size(t) == 0);
  CHECK(serialize(t) == "T()");
  CHECK(eval_trimmed(t, 2) == BoolFn::constant(2, true));
  CHECK(t.cut_nodes == 3);
}

TEST_CASE("absorbed disjunction trims to a constant leaf") {
  TrimmedTree t = trim(parse("(x1&(x1|x2))"));
  CHECK(trim_size(t) == 1);
  CHECK(serialize(t) == "(x1&T())");
  CHECK(eval_trimmed(t, 2) == BoolFn::literal(2, 1, false));
}

TEST_CASE("trees without repetitions cannot be trimmed") {
  Rng rng(41);
  for (int m = 2; m <= 5; ++m) {
    for (const TreeShape& shape : enumerate_shapes(m)) {
      // all leaf variables distinct
      AndOrTree t;
      t.shape = shape;
      t.gates.assign(shape.nodes.size(), Gate::And);
      t.leaf_labels.assign(shape.nodes.size(), Literal{});
      int var = 1;
      for (int v = 0; v < shape.node_count(); ++v) {
        if (shape.is_leaf(v))
          t.leaf_labels[v] = Literal{var++, rng.coin()};
        else
          t.gates[v] = rng.coin() ? Gate::And : Gate::Or;
      }
      TrimmedTree trimmed = trim(t);
      CHECK(trim_size(trimmed) == size(t));
      CHECK(trimmed.cut_nodes == 0);
      CHECK(serialize(trimmed) == serialize(t));
    }
  }
}

TEST_CASE("trim size counts only literal leaves") {
  CHECK(trim_size(parse_trimmed("T()")) == 0);
  CHECK(trim_size(parse_trimmed("(x1&T())")) == 1);
  AndOrTree t = parse("((x1&x2)|x3)");
  CHECK(trim_size(trim(t)) == size(t));
}

TEST_CASE("repetition counting") {
  AndOrTree big = parse("((x1&x1)|x2|(~x3&(x1|x2|~x3|x2)))");
  CHECK(size(big) == 8);
  CHECK(repetitions(big) == 5);
  CHECK(repetitions(parse("(x1|x2|~x3)")) == 0);
  CHECK(repetitions(parse("(x1|x1|~x1)")) == 2);
}

TEST_CASE("function preservation, exhaustive and random") {
  // all shapes up to 4 leaves, all labellings, k <= 2
  for (int k = 1; k <= 2; ++k) {
    for (int m = 1; m <= 4; ++m) {
      for (const TreeShape& shape : enumerate_shapes(m)) {
        std::vector<int> leaves, internals;
        for (int v = 0; v < shape.node_count(); ++v)
          (shape.is_leaf(v) ? leaves : internals).push_back(v);
        AndOrTree t;
        t.shape = shape;
        t.gates.assign(shape.nodes.size(), Gate::And);
        t.leaf_labels.assign(shape.nodes.size(), Literal{1, false});
        std::uint64_t lit_count = 2 * k;
        for (std::uint64_t g = 0; g < (std::uint64_t{1} << internals.size()); ++g) {
          for (std::size_t i = 0; i < internals.size(); ++i)
            t.gates[internals[i]] = (g >> i) & 1 ? Gate::Or : Gate::And;
          std::vector<std::uint64_t> digits(leaves.size(), 0);
          while (true) {
            for (std::size_t i = 0; i < leaves.size(); ++i)
              t.leaf_labels[leaves[i]] = Literal{static_cast<int>(digits[i] / 2) + 1,
                                                 (digits[i] & 1) != 0};
            CHECK(eval_trimmed(trim(t), k) == eval_tree(t, k));
            std::size_t pos = digits.size();
            bool done = false;
            while (pos > 0) {
              --pos;
              if (++digits[pos] < lit_count) break;
              digits[pos] = 0;
              if (pos == 0) done = true;
            }
            if (done) break;
          }
        }
      }
    }
  }
  // random conditioned trees at k = 3
  Rng rng(43);
  OffspringDist cat = OffspringDist::catalan();
  for (int i = 0; i < 1000; ++i) {
    std::optional<TreeShape> shape;
    while (!shape) shape = sample_gw(cat, rng, 101);
    AndOrTree t = random_labelling(*shape, 3, rng);
    CHECK(eval_trimmed(trim(t), 3) == eval_tree(t, 3));
  }
}

TEST_CASE("trim monotonicity") {
  Rng rng(47);
  OffspringDist cat = OffspringDist::catalan();
  for (int i = 0; i < 500; ++i) {
    std::optional<TreeShape> shape;
    while (!shape) shape = sample_gw(cat, rng, 101);
    AndOrTree t = random_labelling(*shape, 2, rng);
    TrimmedTree trimmed = trim(t);
    CHECK(trim_size(trimmed) <= size(t));
    CHECK(repetitions(trimmed) <= repetitions(t));
  }
}

TEST_CASE("siblings are cut together") {
  Rng rng(53);
  OffspringDist cat = OffspringDist::catalan();
  for (int i = 0; i < 300; ++i) {
    std::optional<TreeShape> shape;
    while (!shape) shape = sample_gw(cat, rng, 101);
    AndOrTree t = random_labelling(*shape, 2, rng);
    TrimmedTree trimmed = trim(t);
    // every trimmed node either keeps its full child count or became a leaf
    std::vector<std::pair<int, int>> stack{{t.shape.root(), trimmed.shape.root()}};
    while (!stack.empty()) {
      auto [ov, tv] = stack.back();
      stack.pop_back();
      if (t.shape.is_leaf(ov)) continue;
      if (trimmed.kind[tv] == TrimmedTree::Kind::GateLeaf) continue;
      REQUIRE(trimmed.shape.nodes[tv].children.size() ==
              t.shape.nodes[ov].children.size());
      for (std::size_t c = 0; c < t.shape.nodes[ov].children.size(); ++c)
        stack.emplace_back(t.shape.nodes[ov].children[c],
                           trimmed.shape.nodes[tv].children[c]);
    }
  }
}

TEST_CASE("trimming commutes with the negation dual") {
  Rng rng(59);
  OffspringDist cat = OffspringDist::catalan();
  for (int i = 0; i < 300; ++i) {
    std::optional<TreeShape> shape;
    while (!shape) shape = sample_gw(cat, rng, 64);
    AndOrTree t = random_labelling(*shape, 2, rng);
    CHECK(serialize(trim(negation_dual(t))) == serialize(negation_dual(trim(t))));
  }
}

TEST_CASE("trimmed-tree serialization round trip") {
  Rng rng(61);
  OffspringDist cat = OffspringDist::catalan();
  for (int i = 0; i < 200; ++i) {
    std::optional<TreeShape> shape;
    while (!shape) shape = sample_gw(cat, rng, 64);
    TrimmedTree trimmed = trim(random_labelling(*shape, 2, rng));
    std::string text = serialize(trimmed);
    CHECK(serialize(parse_trimmed(text)) == text);
  }
  CHECK_THROWS_AS(parse_trimmed("(T())"), ParseError);
}

TEST_CASE("trim report fields") {
  std::string report = trim_report_json(parse("(x1|~x1|x2)"), 2);
  CHECK(report.find("\"trim_size\": 0") != std::string::npos);
  CHECK(report.find("\"input_size\": 3") != std::string::npos);
  CHECK(report.find("\"repetitions_before\": 1") != std::string::npos);
  CHECK(report.find("2:F") != std::string::npos);  // the constant True at k=2
}

TEST_CASE("constraint sets detect contradictions") {
  ConstraintSet cs;
  CHECK(cs.require(3, true));
  CHECK(cs.require(3, true));
  CHECK(cs.require(5, false));
  CHECK_FALSE(cs.require(3, false));
  CHECK_FALSE(cs.consistent());
}
