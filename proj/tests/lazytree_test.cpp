#include "doctest.h"

#include <cmath>
#include <map>

#include "andor/lazytree.hpp"
#include "andor/limitdist.hpp"
#include "andor/trimming.hpp"

using namespace andor;

namespace {

double sigma_bound(double p, int n, double z = 4.0) {
  return z * std::sqrt(p * (1 - p) / n);
}

// Fully materializes a lazy subtree (small sizes only).
TreeShape materialize(LazyArena& arena, int root) {
  TreeShape t;
  t.nodes.emplace_back();
  std::vector<std::pair<int, int>> stack{{root, 0}};
  while (!stack.empty()) {
    auto [av, sv] = stack.back();
    stack.pop_back();
    int cnt = arena.child_count(av);
    for (int i = 0; i < cnt; ++i) {
      int c = t.node_count();
      t.nodes.emplace_back();
      t.nodes[sv].children.push_back(c);
      stack.emplace_back(arena.child(av, i), c);
    }
  }
  return t;
}

}  // namespace

TEST_CASE("lazy value agrees with the full table") {
  // The table and per-assignment routes may explore different children, but
  // on one arena they describe the same lazily drawn tree, so the values
  // must coincide.
  SpineSpec spec = SpineSpec::branching(OffspringDist::catalan());
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    WorkBudget budget(1 << 22);
    LazyArena arena(spec, 3, &budget);
    std::uint64_t s = seed;
    int root = arena.new_root(splitmix64(s));
    std::vector<std::uint64_t> mask{0xff}, out{0};
    arena.table_value(root, mask.data(), out.data());
    std::uint64_t scalar = 0;
    for (std::uint64_t a = 0; a < 8; ++a)
      if (arena.value_at(root, a)) scalar |= std::uint64_t{1} << a;
    CHECK((out[0] & 0xff) == scalar);
  }
}

TEST_CASE("classify agrees with full stabilization") {
  SpineSpec spec = SpineSpec::branching(OffspringDist::catalan());
  SpineEvaluator::Caps caps;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    SpineEvaluator ev(spec, 2, Rng(seed), caps);
    auto f = ev.full_function();
    REQUIRE(f.has_value());
    SpineEvaluator ev2(spec, 2, Rng(seed), caps);
    std::vector<BoolFn> targets{*f, ~*f};
    auto cls = ev2.classify(targets);
    CHECK(cls[0] == 1);
    CHECK(cls[1] == 0);
    ++checked;
  }
  CHECK(checked == 300);
}

TEST_CASE("stabilized results are invariant to larger caps") {
  SpineSpec spec = SpineSpec::ford_alpha(0.5);
  SpineEvaluator::Caps caps;
  SpineEvaluator::Caps big = caps;
  big.depth_cap *= 2;
  big.work_budget *= 2;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    SpineEvaluator ev(spec, 2, Rng(seed), caps);
    SpineEvaluator ev2(spec, 2, Rng(seed), big);
    auto f1 = ev.full_function();
    auto f2 = ev2.full_function();
    REQUIRE(f1.has_value());
    REQUIRE(f2.has_value());
    CHECK(*f1 == *f2);
  }
}

TEST_CASE("tiny budgets censor instead of crashing") {
  SpineSpec spec = SpineSpec::branching(OffspringDist::catalan());
  SpineEvaluator::Caps caps;
  caps.work_budget = 3;
  SpineEvaluator ev(spec, 2, Rng(5), caps);
  CHECK_FALSE(ev.full_function().has_value());
  SpineTrimStats st = spine_trim_stats(spec, 2, Rng(5), 3);
  CHECK(st.censored);
  // single-leaf forests fit even in a 3-unit budget; larger ones censor
  int censored = 0;
  for (std::uint64_t s = 0; s < 100; ++s)
    if (sample_hanging_forest(spec, 2, Rng(s), 3).censored) ++censored;
  CHECK(censored > 20);
  CHECK(censored < 100);
}

TEST_CASE("forest pair statistics: exact small-category oracles") {
  // Catalan forests hold a single unconditioned tree, so
  //   P(no pair)    = P(single leaf)  = 1/2
  //   P(C=1, N=1)   = P(cherry)       = 1/8
  SpineSpec spec = SpineSpec::branching(OffspringDist::catalan());
  const int n = 40000;
  int no_pair = 0, cherry = 0, censored = 0;
  for (int i = 0; i < n; ++i) {
    ForestSample s = sample_hanging_forest(spec, 4, task_rng(99, i));
    if (s.censored) {
      ++censored;
      continue;
    }
    if (!s.has_pair) ++no_pair;
    else if (s.min_branch_nodes == 1 && s.min_pair_count == 1) ++cherry;
  }
  CHECK(censored < n / 1000);
  CHECK(std::abs(no_pair / double(n) - 0.5) < sigma_bound(0.5, n));
  CHECK(std::abs(cherry / double(n) - 0.125) < sigma_bound(0.125, n));
}

TEST_CASE("bounded pair search equals a brute-force pair scan") {
  // Small random forests, both routes on the identical materialized input.
  OffspringDist d;
  d.p = {0.57, 0.0, 0.35, 0.05, 0.0, 0.03};
  // sum 1, mean = .7 + .15 + .15 = 1
  d.critical = true;
  SpineModel model(d, 4096);
  Rng rng(777);
  int compared = 0;
  while (compared < 400) {
    SpineLevel lv = model.next_level(rng);
    int total_leaves = 0;
    for (const TreeShape& t : lv.hung) total_leaves += size(t);
    if (total_leaves > 60) continue;  // keep the brute scan quadratic-cheap
    ++compared;

    ForestPairStats fast = forest_pair_stats(lv.hung);

    // brute force over all leaf pairs, same-tree via path unions
    int best = INT32_MAX;
    std::uint64_t count = 0;
    auto consider = [&](int c, std::uint64_t n_pairs) {
      if (c < best) {
        best = c;
        count = n_pairs;
      } else if (c == best) {
        count += n_pairs;
      }
    };
    std::vector<std::pair<int, std::uint64_t>> tree_min;  // per tree: (min w, count)
    for (const TreeShape& t : lv.hung) {
      std::vector<int> parent(t.nodes.size(), -1);
      for (int v = 0; v < t.node_count(); ++v)
        for (int c : t.nodes[v].children) parent[c] = v;
      std::vector<int> leaf_ids;
      for (int v = 0; v < t.node_count(); ++v)
        if (t.is_leaf(v)) leaf_ids.push_back(v);
      auto path_internals = [&](int v) {
        std::set<int> path;
        for (int u = v; u != -1; u = parent[u])
          if (!t.is_leaf(u)) path.insert(u);
        return path;
      };
      int mn = INT32_MAX;
      std::uint64_t mn_count = 0;
      for (int leaf : leaf_ids) {
        int w = static_cast<int>(path_internals(leaf).size());
        if (w < mn) {
          mn = w;
          mn_count = 1;
        } else if (w == mn) {
          ++mn_count;
        }
      }
      if (!leaf_ids.empty()) tree_min.emplace_back(mn, mn_count);
      for (std::size_t i1 = 0; i1 < leaf_ids.size(); ++i1)
        for (std::size_t i2 = i1 + 1; i2 < leaf_ids.size(); ++i2) {
          std::set<int> uni = path_internals(leaf_ids[i1]);
          auto p2 = path_internals(leaf_ids[i2]);
          uni.insert(p2.begin(), p2.end());
          consider(static_cast<int>(uni.size()), 1);
        }
    }
    for (std::size_t a = 0; a < tree_min.size(); ++a)
      for (std::size_t b = a + 1; b < tree_min.size(); ++b)
        consider(tree_min[a].first + tree_min[b].first,
                 tree_min[a].second * tree_min[b].second);

    if (best == INT32_MAX) {
      CHECK_FALSE(fast.has_pair);
    } else {
      REQUIRE(fast.has_pair);
      CHECK(fast.min_branch_nodes == best);
      CHECK(fast.min_pair_count == count);
    }
  }
}

TEST_CASE("lazy forest categories match closed-form probabilities") {
  // For p = {.57, 0, .35, .05, 0, .03} the size-biased degree law gives
  // hung-tree counts m in {1, 2, 4} w.p. {.7, .15, .15}; a tree is a bare
  // leaf w.p. p0 = .57. Categories with closed forms:
  //   P(no pair)     = .7 * .57                         = .3990
  //   P(C = 0)       = .15 * (.57^2 + P(Bin(4,.57)>=2)) = .166415...
  //   P(C = 0, N = 1)= .15 * (.57^2 + 6 .57^2 .43^2)    = .102802...
  OffspringDist d;
  d.p = {0.57, 0.0, 0.35, 0.05, 0.0, 0.03};
  d.critical = true;
  SpineSpec spec = SpineSpec::branching(d);
  const int n = 30000;
  int no_pair = 0, c0 = 0, c0n1 = 0;
  for (int i = 0; i < n; ++i) {
    ForestSample s = sample_hanging_forest(spec, 3, task_rng(123, i));
    REQUIRE_FALSE(s.censored);
    if (!s.has_pair) ++no_pair;
    else if (s.min_branch_nodes == 0) {
      ++c0;
      if (s.min_pair_count == 1) ++c0n1;
    }
  }
  CHECK(std::abs(no_pair / double(n) - 0.3990) < sigma_bound(0.3990, n));
  CHECK(std::abs(c0 / double(n) - 0.1664154) < sigma_bound(0.1664, n));
  CHECK(std::abs(c0n1 / double(n) - 0.1028016) < sigma_bound(0.1028, n));
}

TEST_CASE("cross-tree minima need no branch nodes") {
  // a law with mostly leaves: forests are often several single leaves
  OffspringDist d;
  d.p = {0.75, 0.0, 0.0, 0.0, 0.25};  // mean 1
  d.critical = true;
  SpineSpec spec = SpineSpec::branching(d);
  int zero_c = 0, trials = 2000;
  for (int i = 0; i < trials; ++i) {
    ForestSample s = sample_hanging_forest(spec, 2, task_rng(5, i));
    if (s.has_pair && s.min_branch_nodes == 0) ++zero_c;
  }
  CHECK(zero_c > 0);
}

TEST_CASE("lazy trimming matches the materialized trimming in law") {
  // E[L] over single-level forests, lazy vs materialize-label-trim
  SpineSpec spec = SpineSpec::branching(OffspringDist::catalan());
  const int n = 20000, k = 2;
  double lazy_sum = 0;
  for (int i = 0; i < n; ++i) {
    ForestSample s = sample_hanging_forest(spec, k, task_rng(31, i));
    REQUIRE_FALSE(s.censored);
    lazy_sum += static_cast<double>(s.trim_leaves);
  }
  SpineModel model(OffspringDist::catalan(), 1 << 18);
  Rng rng(313);
  double mat_sum = 0, mat_sumsq = 0;
  for (int i = 0; i < n; ++i) {
    SpineLevel lv = model.next_level(rng);
    double L = 0;
    for (const TreeShape& t : lv.hung)
      L += trim_size(trim(random_labelling(t, k, rng)));
    mat_sum += L;
    mat_sumsq += L * L;
  }
  double mat_mean = mat_sum / n;
  double mat_se = std::sqrt((mat_sumsq / n - mat_mean * mat_mean) / n);
  CHECK(std::abs(lazy_sum / n - mat_mean) < 6 * mat_se);
}

TEST_CASE("alpha subtree recursion matches the grown sampler in law") {
  const int n_leaves = 6, trials = 30000;
  double alpha = 0.5;
  std::map<std::string, int> lazy_hist, grown_hist;
  for (int i = 0; i < trials; ++i) {
    Rng rng = task_rng(41, i);
    WorkBudget budget(1 << 22);
    SpineSpec spec = SpineSpec::ford_alpha(alpha);
    LazyArena arena(spec, 2, &budget);
    int root = arena.new_root(rng.next(), n_leaves);
    ++lazy_hist[shape_key(materialize(arena, root))];
  }
  Rng rng(43);
  for (int i = 0; i < trials; ++i)
    ++grown_hist[shape_key(sample_alpha(n_leaves, alpha, rng))];
  double tv = 0;
  std::set<std::string> keys;
  for (const auto& [key, c] : lazy_hist) keys.insert(key);
  for (const auto& [key, c] : grown_hist) keys.insert(key);
  for (const auto& key : keys)
    tv += std::abs(lazy_hist[key] - grown_hist[key]) / double(trials);
  tv /= 2;
  CHECK(tv < 0.05);
}

TEST_CASE("spine trim statistics stay finite and uncensored at scale") {
  SpineSpec spec = SpineSpec::branching(OffspringDist::catalan());
  int censored = 0;
  double mean = 0;
  const int n = 5000;
  for (int i = 0; i < n; ++i) {
    SpineTrimStats st = spine_trim_stats(spec, 8, task_rng(17, i));
    if (st.censored) ++censored;
    mean += static_cast<double>(st.trim_leaves);
    CHECK(st.distinct_vars <= st.trim_leaves);
    CHECK(st.distinct_vars <= 8);
  }
  CHECK(censored == 0);
  CHECK(mean / n > 1.0);  // the trimmed spine keeps a nontrivial leaf count
}
