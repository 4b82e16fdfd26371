#pragma once

#include <map>
#include <string>

#include "andor/exprtree.hpp"

namespace andor {

// Partial assignment var -> required value. Inconsistent exactly when some
// variable is required both ways; sets only grow along root-to-leaf paths.
class ConstraintSet {
 public:
  // Returns false when the addition makes the set inconsistent.
  bool require(int var, bool value);
  bool consistent() const { return consistent_; }
  std::size_t size() const { return forced_.size(); }
  const std::map<int, bool>& forced() const { return forced_; }

 private:
  std::map<int, bool> forced_;
  bool consistent_ = true;
};

// An and/or tree in which some leaves may be gate-labelled: internal nodes
// whose whole progeny was cut. A gate-leaf labelled AND evaluates to False,
// one labelled OR to True.
struct TrimmedTree {
  enum class Kind : std::uint8_t { Internal, LiteralLeaf, GateLeaf };
  TreeShape shape;
  std::vector<Kind> kind;
  std::vector<Gate> gates;          // Internal and GateLeaf nodes
  std::vector<Literal> leaf_labels; // LiteralLeaf nodes
  int cut_nodes = 0;                // nodes of the input that were removed
};

// Constraint-propagation trimming. Constraint sets are built top-down: every
// child of an AND node u picks up {Lab(w)=True} for each leaf child w of u,
// every child of an OR node {Lab(w)=False}; a leaf's own contribution is
// included in its own set. Nodes with unsatisfiable sets are removed.
TrimmedTree trim(const AndOrTree& tree);

// Number of literal-labelled leaves; gate-leaves count zero.
int trim_size(const TrimmedTree& t);

// (number of literal leaves) - (number of distinct variables among them).
int repetitions(const AndOrTree& t);
int repetitions(const TrimmedTree& t);

BoolFn eval_trimmed(const TrimmedTree& t, int k);

// Flips gates and negates literals, including gate-leaves.
TrimmedTree negation_dual(const TrimmedTree& t);

// Canonical text; gate-leaves appear as "T()" (cut OR node) and "F()"
// (cut AND node).
std::string serialize(const TrimmedTree& t);
TrimmedTree parse_trimmed(const std::string& text);

// JSON trim report, see the CLI's `trim` subcommand.
std::string trim_report_json(const AndOrTree& tree, int k);

}  // namespace andor
