#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "andor/boolfn.hpp"
#include "andor/rng.hpp"

namespace andor {

// A variable x_var or its negation.
struct Literal {
  int var = 1;  // 1-based
  bool negated = false;
  bool operator==(const Literal&) const = default;
};

enum class Gate : std::uint8_t { And, Or };

inline Gate dual(Gate g) { return g == Gate::And ? Gate::Or : Gate::And; }

// Rooted ordered tree; internal nodes have >= 2 children. Node 0 is the root.
// Children hold indices into `nodes`.
struct TreeShape {
  struct Node {
    std::vector<int> children;
  };
  std::vector<Node> nodes;

  int root() const { return 0; }
  bool is_leaf(int v) const { return nodes[v].children.empty(); }
  int node_count() const { return static_cast<int>(nodes.size()); }

  static TreeShape single_leaf();
  // Builds a node with the given child subtrees (each moved in whole).
  static TreeShape with_children(const std::vector<TreeShape>& subtrees);

  // Throws if some internal node has exactly one child or indices are broken.
  void validate() const;
};

// Leaf count.
int size(const TreeShape& t);

// Minimum depth of a leaf; the root has depth 0.
int saturation_level(const TreeShape& t);

int height(const TreeShape& t);

// Subtree induced on nodes at distance <= h from the root. Diagnostic only:
// the result can degenerate to a bare root.
TreeShape truncate(const TreeShape& t, int h);

// Equality as ordered rooted trees.
bool same_shape(const TreeShape& a, const TreeShape& b);

// Canonical text for a shape (leaves as "*"), used for histogram keys.
std::string shape_key(const TreeShape& t);

// An and/or tree: a shape plus a total labelling. gates[v] is meaningful for
// internal v, leaf_labels[v] for leaves.
struct AndOrTree {
  TreeShape shape;
  std::vector<Gate> gates;
  std::vector<Literal> leaf_labels;

  void validate() const;
};

int size(const AndOrTree& t);

// Largest variable index appearing on a leaf.
int max_var(const AndOrTree& t);

// i.i.d. uniform gates and uniform literals among the 2k possibilities.
AndOrTree random_labelling(const TreeShape& t, int k, Rng& rng);

// Bottom-up evaluation to a k-variable function. Throws if a leaf variable
// exceeds k.
BoolFn eval_tree(const AndOrTree& t, int k);

// Evaluation at one assignment by walking the tree, no truth tables. Used as
// an independent route to cross-check eval_tree.
bool eval_tree_at(const AndOrTree& t, const std::vector<int>& assignment);

// Flips every gate and negates every literal; computes the negation of the
// original function.
AndOrTree negation_dual(const AndOrTree& t);

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), pos(position) {}
  std::size_t pos;
};

// Grammar (whitespace insignificant):
//   expr    := literal | '(' expr (op expr)+ ')'
//   op      := '&' | '|'      -- all ops within one group must be identical
//   literal := ['~'] 'x' DIGITS
// Groups with a single child are rejected.
AndOrTree parse(const std::string& text);

// Canonical form: parenthesized groups, "&"/"|", "~", no whitespace.
std::string serialize(const AndOrTree& t);

}  // namespace andor
