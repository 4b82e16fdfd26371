#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "andor/boolfn.hpp"
#include "andor/treegen.hpp"

namespace andor {

// Thrown (and caught internally) when a per-trial work budget or cap is
// exhausted; the trial is then reported as censored / not stabilized.
struct CapExceeded {};

class WorkBudget {
 public:
  explicit WorkBudget(std::uint64_t units) : remaining_(units) {}
  void charge(std::uint64_t units = 1) {
    if (remaining_ < units) throw CapExceeded{};
    remaining_ -= units;
  }
  std::uint64_t remaining() const { return remaining_; }

 private:
  std::uint64_t remaining_;
};

// Key combiner for address-derived randomness.
inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64(s);
}

// Local limit of a tree family: an infinite spine with independent finite
// subtrees hanging off each spine node.
struct SpineSpec {
  enum class Kind { BranchingProcess, FordAlpha };
  Kind kind = Kind::BranchingProcess;
  OffspringDist offspring;  // BranchingProcess: spine degrees are size-biased
  double alpha = 0.5;       // FordAlpha: binary spine, hung subtree sizes from
                            // the alpha-model size law

  static SpineSpec branching(OffspringDist d);
  static SpineSpec ford_alpha(double a);
};

// Arena of lazily expanded, randomly labelled tree nodes. Every node carries
// a 64-bit address; its offspring count (or alpha size split) and its gate or
// literal are drawn from an RNG seeded by that address, and child addresses
// are derived from the parent's. A trial therefore realizes the same tree no
// matter which parts are explored in which order, and re-running with larger
// caps only extends the exploration. One arena per trial, single-threaded.
class LazyArena {
 public:
  LazyArena(const SpineSpec& spec, int k, WorkBudget* budget);

  int k() const { return k_; }
  std::size_t words() const { return words_; }

  // New unexpanded subtree root. For FordAlpha arenas the leaf count of the
  // subtree must be supplied.
  int new_root(std::uint64_t address);
  int new_root(std::uint64_t address, std::int64_t alpha_size);

  void expand(int v);
  void charge(std::uint64_t units = 1) { budget_->charge(units); }
  bool is_leaf(int v) { expand(v); return nodes_[v].nchild == 0; }
  int child_count(int v) { expand(v); return nodes_[v].nchild; }
  int child(int v, int i) const { return nodes_[v].first_child + i; }
  Gate gate(int v) { expand(v); return nodes_[v].g; }
  Literal literal(int v) { expand(v); return nodes_[v].lit; }

  // Value of the subtree at one assignment, short-circuiting absorbed
  // children (children after an absorbing one are never expanded).
  bool value_at(int v, std::uint64_t assignment);

  // Truth table of the subtree, exact on the bits set in `mask` (garbage
  // elsewhere); children are cut short once the accumulator is absorbing on
  // the still-relevant bits. mask/out are arrays of words() length.
  void table_value(int v, const std::uint64_t* mask, std::uint64_t* out);

  const std::uint64_t* literal_words(int var);

 private:
  struct Node {
    std::uint64_t addr = 0;
    std::int64_t alpha_size = -1;
    int first_child = -1;
    int nchild = -1;  // -1 while unexpanded
    Gate g = Gate::And;
    Literal lit;
  };
  void table_value_rec(int v, const std::uint64_t* mask, std::uint64_t* out,
                       std::size_t depth);
  std::uint64_t* scratch(std::size_t depth, std::size_t slot);

  SpineSpec spec_;
  int k_;
  std::size_t words_;
  WorkBudget* budget_;
  std::vector<Node> nodes_;
  std::vector<std::vector<std::uint64_t>> literal_tables_;
  std::vector<std::vector<std::uint64_t>> scratch_;
};

// Evaluation of the randomly labelled local limit: descend the spine keeping
// the tree's value with the not-yet-revealed tail forced to True and to
// False; the function is determined once the two agree everywhere.
class SpineEvaluator {
 public:
  struct Caps {
    int depth_cap = 100000;                  // spine levels
    std::uint64_t work_budget = 20'000'000;  // node visits / word operations
  };

  SpineEvaluator(const SpineSpec& spec, int k, Rng rng, Caps caps);

  // Stabilized function, or nullopt when a cap was hit first.
  std::optional<BoolFn> full_function();

  // Per-target result: 1 = the limit function equals the target, 0 = it does
  // not, -1 = undetermined (cap hit). Cheap scalar scan first, full table
  // stabilization only when a target survives the scan. Address-derived
  // randomness makes the answer identical to full_function comparisons.
  std::vector<int> classify(const std::vector<BoolFn>& targets);

 private:
  struct Level {
    Gate gate;
    std::vector<int> hung;
  };
  void ensure_level(std::size_t h);
  // Stabilized value of the limit function at one assignment.
  bool value_at(std::uint64_t assignment);

  SpineSpec spec_;
  int k_;
  std::uint64_t trial_key_;
  Caps caps_;
  WorkBudget budget_;
  LazyArena arena_;
  std::vector<Level> levels_;
};

// Trimming statistics of one labelled sample of the local limit. The
// constraint walk descends the spine until the accumulated set turns
// inconsistent, lazily trimming hung subtrees on the way; only consistent
// regions are ever expanded. Valid for k up to 64 (no truth tables involved).
struct SpineTrimStats {
  std::int64_t trim_leaves = 0;    // literal leaves surviving the trim
  std::int64_t distinct_vars = 0;  // distinct variables among them
  bool censored = false;
  std::int64_t repetitions() const { return trim_leaves - distinct_vars; }
};

SpineTrimStats spine_trim_stats(const SpineSpec& spec, int k, Rng rng,
                                std::uint64_t work_budget = 4'000'000,
                                int level_cap = 100000);

// One hanging forest of the local limit, analyzed for the quantities of the
// constant-function bounds: C = the minimal number of branch points on the
// union of two root paths over leaf pairs, N = the number of minimizing
// pairs, L = trim size of the forest (per-tree trim, empty root constraints).
struct ForestSample {
  bool has_pair = false;  // forests with < 2 leaves contribute N/2^C = 0
  int min_branch_nodes = 0;          // C_A
  std::uint64_t min_pair_count = 0;  // N_A
  std::int64_t trim_leaves = 0;      // L
  bool censored = false;
};

ForestSample sample_hanging_forest(const SpineSpec& spec, int k, Rng rng,
                                   std::uint64_t work_budget = 4'000'000);

// The same bounded pair search on a materialized forest of shapes.
struct ForestPairStats {
  bool has_pair = false;
  int min_branch_nodes = 0;
  std::uint64_t min_pair_count = 0;
};

ForestPairStats forest_pair_stats(const std::vector<TreeShape>& forest);

}  // namespace andor
