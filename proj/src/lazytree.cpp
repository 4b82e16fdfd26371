#include "andor/lazytree.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include "andor/trimming.hpp"

namespace andor {

namespace {
constexpr std::uint64_t kLevelTag = 0x6c75636b796c7666ULL;
constexpr std::uint64_t kHungTag = 0x68756e6774726565ULL;
constexpr std::uint64_t kChildTag = 0x6368696c646b6579ULL;
}  // namespace

SpineSpec SpineSpec::branching(OffspringDist d) {
  d.validate();
  if (!d.critical)
    throw std::invalid_argument("spine limits need a critical offspring law");
  SpineSpec s;
  s.kind = Kind::BranchingProcess;
  s.offspring = std::move(d);
  return s;
}

SpineSpec SpineSpec::ford_alpha(double a) {
  if (!(a > 0.0) || a > 1.0)
    throw std::invalid_argument("alpha must lie in (0, 1]");
  SpineSpec s;
  s.kind = Kind::FordAlpha;
  s.alpha = a;
  return s;
}

LazyArena::LazyArena(const SpineSpec& spec, int k, WorkBudget* budget)
    : spec_(spec), k_(k), budget_(budget) {
  if (k < 1 || k > 64) throw std::invalid_argument("k must lie in [1, 64]");
  std::uint64_t bits = std::uint64_t{1} << std::min(k, 26);
  words_ = static_cast<std::size_t>((bits + 63) / 64);
}

int LazyArena::new_root(std::uint64_t address) {
  if (spec_.kind != SpineSpec::Kind::BranchingProcess)
    throw std::logic_error("alpha arenas need a subtree size");
  Node n;
  n.addr = address;
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

int LazyArena::new_root(std::uint64_t address, std::int64_t alpha_size) {
  if (spec_.kind != SpineSpec::Kind::FordAlpha)
    throw std::logic_error("size only applies to alpha arenas");
  Node n;
  n.addr = address;
  n.alpha_size = alpha_size;
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

void LazyArena::expand(int v) {
  if (nodes_[v].nchild >= 0) return;
  budget_->charge();
  Rng local(nodes_[v].addr);
  int arity;
  std::int64_t left = 0;
  if (spec_.kind == SpineSpec::Kind::BranchingProcess) {
    arity = spec_.offspring.sample(local);
  } else {
    std::int64_t s = nodes_[v].alpha_size;
    if (s == 1) {
      arity = 0;
    } else {
      std::uint64_t steps = 0;
      left = sample_alpha_split(s, spec_.alpha, local, &steps,
                                budget_->remaining());
      budget_->charge(steps);
      if (left < 0) throw CapExceeded{};
      arity = 2;
    }
  }
  if (arity == 0) {
    Node& leaf = nodes_[v];
    leaf.nchild = 0;
    std::uint64_t u = local.below(2 * static_cast<std::uint64_t>(k_));
    leaf.lit = Literal{static_cast<int>(u / 2) + 1, (u & 1) != 0};
    return;
  }
  budget_->charge(arity);
  std::uint64_t addr = nodes_[v].addr;
  std::int64_t parent_size = nodes_[v].alpha_size;
  nodes_[v].nchild = arity;
  nodes_[v].g = local.coin() ? Gate::And : Gate::Or;
  nodes_[v].first_child = static_cast<int>(nodes_.size());
  for (int i = 0; i < arity; ++i) {
    Node c;
    c.addr = mix_key(mix_key(addr, kChildTag), static_cast<std::uint64_t>(i));
    if (spec_.kind == SpineSpec::Kind::FordAlpha)
      c.alpha_size = i == 0 ? left : parent_size - left;
    nodes_.push_back(c);
  }
}

bool LazyArena::value_at(int v, std::uint64_t assignment) {
  budget_->charge();
  expand(v);
  const Node& n = nodes_[v];
  if (n.nchild == 0) {
    bool val = (assignment >> (n.lit.var - 1)) & 1;
    return n.lit.negated ? !val : val;
  }
  Gate g = n.g;
  int base = n.first_child;
  int cnt = n.nchild;
  for (int i = 0; i < cnt; ++i) {
    bool cv = value_at(base + i, assignment);
    if (g == Gate::And) {
      if (!cv) return false;
    } else {
      if (cv) return true;
    }
  }
  return g == Gate::And;
}

const std::uint64_t* LazyArena::literal_words(int var) {
  if (literal_tables_.empty()) literal_tables_.resize(k_);
  auto& tab = literal_tables_[var - 1];
  if (tab.empty()) {
    tab.assign(words_, 0);
    int bitpos = var - 1;
    if (bitpos < 6) {
      // pattern repeats within a word
      std::uint64_t w = 0;
      for (int a = 0; a < 64; ++a)
        if ((a >> bitpos) & 1) w |= std::uint64_t{1} << a;
      std::fill(tab.begin(), tab.end(), w);
    } else {
      for (std::size_t i = 0; i < tab.size(); ++i)
        if ((i >> (bitpos - 6)) & 1) tab[i] = ~std::uint64_t{0};
    }
  }
  return tab.data();
}

std::uint64_t* LazyArena::scratch(std::size_t depth, std::size_t slot) {
  std::size_t idx = depth * 2 + slot;
  if (scratch_.size() <= idx) scratch_.resize(idx + 1);
  if (scratch_[idx].size() != words_) scratch_[idx].assign(words_, 0);
  return scratch_[idx].data();
}

void LazyArena::table_value(int v, const std::uint64_t* mask, std::uint64_t* out) {
  table_value_rec(v, mask, out, 0);
}

void LazyArena::table_value_rec(int v, const std::uint64_t* mask,
                                std::uint64_t* out, std::size_t depth) {
  budget_->charge(words_);
  expand(v);
  const Node n = nodes_[v];
  if (n.nchild == 0) {
    const std::uint64_t* lit = literal_words(n.lit.var);
    if (n.lit.negated)
      for (std::size_t w = 0; w < words_; ++w) out[w] = ~lit[w];
    else
      std::memcpy(out, lit, words_ * sizeof(std::uint64_t));
    return;
  }
  const bool conj = n.g == Gate::And;
  std::uint64_t* childbuf = scratch(depth, 0);
  std::uint64_t* curmask = scratch(depth, 1);
  std::memcpy(curmask, mask, words_ * sizeof(std::uint64_t));
  table_value_rec(n.first_child, curmask, out, depth + 1);
  for (int i = 1; i < n.nchild; ++i) {
    // Only bits where the accumulator is not already absorbing still matter.
    std::uint64_t live = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      curmask[w] &= conj ? out[w] : ~out[w];
      live |= curmask[w];
    }
    if (!live) return;
    table_value_rec(n.first_child + i, curmask, childbuf, depth + 1);
    if (conj)
      for (std::size_t w = 0; w < words_; ++w) out[w] &= childbuf[w];
    else
      for (std::size_t w = 0; w < words_; ++w) out[w] |= childbuf[w];
  }
}

namespace {

struct LevelDraw {
  Gate gate;
  std::vector<int> hung;
};

// Draws the spine level h: its degree (size-biased) or hung subtree size
// (alpha law), the spine child position, and the gate. Hung subtree roots
// get addresses derived from (trial key, level, index).
LevelDraw draw_level(const SpineSpec& spec, LazyArena& arena,
                     std::uint64_t trial_key, std::size_t h) {
  std::uint64_t level_key = mix_key(mix_key(trial_key, kLevelTag), h);
  Rng rng(level_key);
  LevelDraw lv;
  if (spec.kind == SpineSpec::Kind::BranchingProcess) {
    int degree = spec.offspring.sample_size_biased(rng);
    (void)rng.below(static_cast<std::uint64_t>(degree));  // spine position
    lv.gate = rng.coin() ? Gate::And : Gate::Or;
    for (int i = 0; i + 1 < degree; ++i)
      lv.hung.push_back(arena.new_root(
          mix_key(mix_key(level_key, kHungTag), static_cast<std::uint64_t>(i))));
  } else {
    std::int64_t s = sample_alpha_hung_size(spec.alpha, rng);
    (void)rng.below(2);  // spine position
    lv.gate = rng.coin() ? Gate::And : Gate::Or;
    lv.hung.push_back(arena.new_root(mix_key(level_key, kHungTag), s));
  }
  return lv;
}

}  // namespace

SpineEvaluator::SpineEvaluator(const SpineSpec& spec, int k, Rng rng, Caps caps)
    : spec_(spec), k_(k), trial_key_(rng.next()), caps_(caps),
      budget_(caps.work_budget), arena_(spec, k, &budget_) {
  if (k < 1 || k > BoolFn::kMaxArity)
    throw std::invalid_argument("spine evaluation needs 1 <= k <= 16");
}

void SpineEvaluator::ensure_level(std::size_t h) {
  while (levels_.size() <= h) {
    budget_.charge();
    LevelDraw draw = draw_level(spec_, arena_, trial_key_, levels_.size());
    levels_.push_back(Level{draw.gate, std::move(draw.hung)});
  }
}

bool SpineEvaluator::value_at(std::uint64_t assignment) {
  bool if_true = true, if_false = false;
  for (int h = 0; h < caps_.depth_cap; ++h) {
    if (if_true == if_false) return if_true;
    ensure_level(static_cast<std::size_t>(h));
    const Level& lv = levels_[h];
    bool conj = lv.gate == Gate::And;
    bool forest = conj;
    for (int r : lv.hung) {
      bool cv = arena_.value_at(r, assignment);
      if (conj) {
        forest = forest && cv;
        if (!forest) break;
      } else {
        forest = forest || cv;
        if (forest) break;
      }
    }
    if (conj) {
      if (!forest) if_true = if_false;
    } else {
      if (forest) if_false = if_true;
    }
  }
  if (if_true == if_false) return if_true;
  throw CapExceeded{};
}

std::optional<BoolFn> SpineEvaluator::full_function() {
  const std::size_t words = arena_.words();
  std::uint64_t bits = std::uint64_t{1} << k_;
  std::vector<std::uint64_t> if_true(words, ~std::uint64_t{0});
  if (bits < 64) if_true[0] = (std::uint64_t{1} << bits) - 1;
  std::vector<std::uint64_t> if_false(words, 0);
  std::vector<std::uint64_t> diff(words), forest(words), tmp(words), msk(words);

  try {
    for (int h = 0; h < caps_.depth_cap; ++h) {
      std::uint64_t live = 0;
      for (std::size_t w = 0; w < words; ++w) {
        diff[w] = if_true[w] ^ if_false[w];
        live |= diff[w];
      }
      if (!live) return BoolFn::from_words(k_, if_true);
      ensure_level(static_cast<std::size_t>(h));
      const Level& lv = levels_[h];
      bool conj = lv.gate == Gate::And;

      // forest = gate-combination of the hung subtrees, exact on diff
      std::memcpy(msk.data(), diff.data(), words * sizeof(std::uint64_t));
      bool first = true;
      for (int r : lv.hung) {
        if (first) {
          arena_.table_value(r, msk.data(), forest.data());
          first = false;
          continue;
        }
        std::uint64_t still = 0;
        for (std::size_t w = 0; w < words; ++w) {
          msk[w] &= conj ? forest[w] : ~forest[w];
          still |= msk[w];
        }
        if (!still) break;
        arena_.table_value(r, msk.data(), tmp.data());
        if (conj)
          for (std::size_t w = 0; w < words; ++w) forest[w] &= tmp[w];
        else
          for (std::size_t w = 0; w < words; ++w) forest[w] |= tmp[w];
      }
      if (first) {
        // empty forest cannot happen for p1 = 0 laws; treat as identity
        std::fill(forest.begin(), forest.end(),
                  conj ? ~std::uint64_t{0} : std::uint64_t{0});
      }
      if (conj) {
        for (std::size_t w = 0; w < words; ++w)
          if_true[w] = (forest[w] & if_true[w]) | (~forest[w] & if_false[w]);
      } else {
        for (std::size_t w = 0; w < words; ++w)
          if_false[w] = (forest[w] & if_true[w]) | (~forest[w] & if_false[w]);
      }
    }
  } catch (const CapExceeded&) {
    return std::nullopt;
  }
  return std::nullopt;  // depth cap reached
}

std::vector<int> SpineEvaluator::classify(const std::vector<BoolFn>& targets) {
  std::vector<int> result(targets.size(), -1);
  for (const auto& t : targets)
    if (t.arity() != k_)
      throw std::invalid_argument("target arity does not match k");

  std::vector<std::size_t> alive(targets.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;

  const std::uint64_t total = std::uint64_t{1} << k_;
  std::uint64_t scanned = 0;
  bool full_scan = true;
  try {
    for (std::uint64_t a = 0; a < total && !alive.empty(); ++a) {
      bool v = value_at(a);
      for (std::size_t i = 0; i < alive.size();) {
        if (targets[alive[i]].bit(a) != v) {
          result[alive[i]] = 0;
          alive[i] = alive.back();
          alive.pop_back();
        } else {
          ++i;
        }
      }
      ++scanned;
      if (scanned >= 64 && scanned < total && !alive.empty()) {
        full_scan = false;
        break;
      }
    }
  } catch (const CapExceeded&) {
    return result;  // survivors stay undetermined
  }
  if (alive.empty()) return result;
  if (full_scan) {
    for (std::size_t i : alive) result[i] = 1;
    return result;
  }
  // A target survived the scan: settle by full stabilization.
  std::optional<BoolFn> f = full_function();
  if (f)
    for (std::size_t i : alive) result[i] = (*f == targets[i]) ? 1 : 0;
  return result;
}

namespace {

// Shared by the spine walk and the forest statistics: counts the literal
// leaves kept by the trimming of the subtree rooted at v, given the
// constraint set its root inherits.
void trim_count_rec(LazyArena& arena, int v, const ConstraintSet& inherited,
                    std::int64_t& leaves, std::uint64_t& varmask) {
  arena.charge();
  Gate g = arena.gate(v);
  ConstraintSet child_set = inherited;
  int cnt = arena.child_count(v);
  for (int i = 0; i < cnt; ++i) {
    int c = arena.child(v, i);
    if (!arena.is_leaf(c)) continue;
    Literal lit = arena.literal(c);
    child_set.require(lit.var, g == Gate::And ? !lit.negated : lit.negated);
  }
  if (!child_set.consistent()) return;  // all children cut, v is a gate-leaf
  for (int i = 0; i < cnt; ++i) {
    int c = arena.child(v, i);
    if (arena.is_leaf(c)) {
      ++leaves;
      varmask |= std::uint64_t{1} << (arena.literal(c).var - 1);
    } else {
      trim_count_rec(arena, c, child_set, leaves, varmask);
    }
  }
}

}  // namespace

SpineTrimStats spine_trim_stats(const SpineSpec& spec, int k, Rng rng,
                                std::uint64_t work_budget, int level_cap) {
  WorkBudget budget(work_budget);
  LazyArena arena(spec, k, &budget);
  std::uint64_t trial_key = rng.next();
  SpineTrimStats stats;
  std::uint64_t varmask = 0;
  ConstraintSet spine_set;
  try {
    int level = 0;
    for (; level < level_cap; ++level) {
      budget.charge();
      LevelDraw lv =
          draw_level(spec, arena, trial_key, static_cast<std::size_t>(level));
      ConstraintSet child_set = spine_set;
      for (int r : lv.hung) {
        if (!arena.is_leaf(r)) continue;
        Literal lit = arena.literal(r);
        child_set.require(lit.var,
                          lv.gate == Gate::And ? !lit.negated : lit.negated);
      }
      if (!child_set.consistent()) break;  // spine cut below this node
      for (int r : lv.hung) {
        if (arena.is_leaf(r)) {
          ++stats.trim_leaves;
          varmask |= std::uint64_t{1} << (arena.literal(r).var - 1);
        } else {
          trim_count_rec(arena, r, child_set, stats.trim_leaves, varmask);
        }
      }
      spine_set = child_set;
    }
    if (level == level_cap) stats.censored = true;
  } catch (const CapExceeded&) {
    stats.censored = true;
  }
  stats.distinct_vars = __builtin_popcountll(varmask);
  return stats;
}

namespace {

// The bounded minimal-pair search runs both on lazy arenas and on
// materialized forests through a small accessor.
struct ArenaAccess {
  LazyArena& arena;
  bool is_leaf(int v) { return arena.is_leaf(v); }
  int child_count(int v) { return arena.child_count(v); }
  int child(int v, int i) { return arena.child(v, i); }
  void charge() { arena.charge(); }
};

struct ShapeAccess {
  const TreeShape& shape;
  bool is_leaf(int v) { return shape.is_leaf(v); }
  int child_count(int v) { return static_cast<int>(shape.nodes[v].children.size()); }
  int child(int v, int i) { return shape.nodes[v].children[i]; }
  void charge() {}
};

// Leaf counts of the subtree at v, indexed by the number of internal nodes
// on the path from v to the leaf (inclusive of v). Tracks only distances
// <= maxw. path_internal = internal nodes from the subtree root down to and
// including v. Candidate pairs meeting at v are folded into cand[].
template <typename Access>
std::vector<std::uint64_t> pair_counts_rec(Access& acc, int v, int maxw,
                                           int path_internal, int bound,
                                           std::vector<std::uint64_t>& cand) {
  acc.charge();
  std::vector<std::uint64_t> cnt(static_cast<std::size_t>(maxw) + 1, 0);
  if (acc.is_leaf(v)) {
    cnt[0] = 1;
    return cnt;
  }
  int limit = bound - path_internal;  // leaf-pair budget below v
  std::vector<std::uint64_t> prefix(cnt.size(), 0);
  int children = acc.child_count(v);
  for (int i = 0; i < children; ++i) {
    int c = acc.child(v, i);
    std::vector<std::uint64_t> cc;
    if (maxw >= 1) {
      cc = pair_counts_rec(acc, c, maxw - 1, path_internal + 1, bound, cand);
    } else if (acc.is_leaf(c)) {
      cc = {1};
    } else {
      cc = {0};
    }
    if (limit >= 0) {
      for (int a = 0; a <= limit && a < static_cast<int>(cc.size()); ++a) {
        if (!cc[a]) continue;
        for (int b = 0; b + a <= limit && b < static_cast<int>(prefix.size()); ++b) {
          if (!prefix[b]) continue;
          cand[path_internal + a + b] += cc[a] * prefix[b];
        }
      }
    }
    for (std::size_t w = 0; w < cc.size(); ++w) {
      if (w < prefix.size()) prefix[w] += cc[w];
      if (w + 1 < cnt.size()) cnt[w + 1] += cc[w];
    }
  }
  return cnt;
}

// Minimal union-branch-node count and the number of minimizing pairs over a
// forest given by per-tree accessors. Returns false if no pair exists within
// bound 64 (practically impossible for a forest with a pair).
template <typename AccessFactory>
bool bounded_pair_scan(AccessFactory&& acc_for, std::size_t tree_count,
                       int* min_c, std::uint64_t* pairs) {
  for (int bound = 2; bound <= 64; bound *= 2) {
    std::vector<std::uint64_t> cand(static_cast<std::size_t>(bound) + 1, 0);
    std::vector<std::uint64_t> cross_prefix(cand.size(), 0);
    for (std::size_t t = 0; t < tree_count; ++t) {
      auto acc = acc_for(t);
      int root = acc.root;
      auto cnt = pair_counts_rec(acc.access, root, bound,
                                 acc.access.is_leaf(root) ? 0 : 1, bound, cand);
      for (int a = 0; a < static_cast<int>(cnt.size()); ++a) {
        if (!cnt[a]) continue;
        for (int b = 0; a + b <= bound; ++b)
          if (cross_prefix[b]) cand[a + b] += cnt[a] * cross_prefix[b];
      }
      for (std::size_t w = 0; w < cnt.size(); ++w) cross_prefix[w] += cnt[w];
    }
    for (int c = 0; c <= bound; ++c) {
      if (cand[c]) {
        *min_c = c;
        *pairs = cand[c];
        return true;
      }
    }
  }
  return false;
}

}  // namespace

ForestSample sample_hanging_forest(const SpineSpec& spec, int k, Rng rng,
                                   std::uint64_t work_budget) {
  WorkBudget budget(work_budget);
  LazyArena arena(spec, k, &budget);
  std::uint64_t trial_key = rng.next();
  ForestSample out;
  try {
    LevelDraw lv = draw_level(spec, arena, trial_key, 0);
    const auto& roots = lv.hung;

    // L: per-tree trimming with empty root constraint sets.
    std::uint64_t varmask = 0;
    for (int r : roots) {
      if (arena.is_leaf(r)) {
        ++out.trim_leaves;
        varmask |= std::uint64_t{1} << (arena.literal(r).var - 1);
      } else {
        trim_count_rec(arena, r, ConstraintSet{}, out.trim_leaves, varmask);
      }
    }

    // Pair existence: any internal root has >= 2 leaves below it.
    bool internal_root = false;
    for (int r : roots)
      if (!arena.is_leaf(r)) internal_root = true;
    out.has_pair = internal_root || roots.size() >= 2;
    if (!out.has_pair) return out;

    struct Bound {
      ArenaAccess access;
      int root;
    };
    auto factory = [&](std::size_t t) { return Bound{ArenaAccess{arena}, roots[t]}; };
    if (!bounded_pair_scan(factory, roots.size(), &out.min_branch_nodes,
                           &out.min_pair_count))
      out.censored = true;
  } catch (const CapExceeded&) {
    out.censored = true;
  }
  return out;
}

ForestPairStats forest_pair_stats(const std::vector<TreeShape>& forest) {
  ForestPairStats out;
  bool internal_root = false;
  for (const TreeShape& t : forest)
    if (!t.is_leaf(t.root())) internal_root = true;
  out.has_pair = internal_root || forest.size() >= 2;
  if (!out.has_pair) return out;

  struct Bound {
    ShapeAccess access;
    int root;
  };
  auto factory = [&](std::size_t t) {
    return Bound{ShapeAccess{forest[t]}, forest[t].root()};
  };
  out.has_pair = bounded_pair_scan(factory, forest.size(), &out.min_branch_nodes,
                                   &out.min_pair_count);
  return out;
}

}  // namespace andor
