#pragma once

#include <map>
#include <string>
#include <vector>

#include "andor/boolfn.hpp"
#include "andor/exprtree.hpp"

namespace andor {

// All plane rooted trees with exactly m leaves and no unary nodes; counts
// are the little Schroeder numbers 1, 1, 3, 11, 45, 197, ...
// Guarded to m <= 8.
std::vector<TreeShape> enumerate_shapes(int m);

struct ComplexityEntry {
  int complexity = 0;        // L(f)
  std::string witness;       // minimal tree, expression text ("T()"/"F()" for constants)
};

// Minimal-tree sizes found by exhaustive search over all shapes and
// labellings by increasing size. Constants are pre-seeded at 0 with
// bare-gate witnesses. Construction parallelizes over the shapes of each
// size; the result does not depend on the worker count.
class ComplexityTable {
 public:
  ComplexityTable(int k, int max_size, int threads = 0);  // 0: default pool

  int arity() const { return k_; }
  int max_size() const { return max_size_; }

  bool contains(const BoolFn& f) const;
  // Throws std::out_of_range for functions the search did not reach.
  int complexity(const BoolFn& f) const;
  const ComplexityEntry& entry(const BoolFn& f) const;

  // True iff f is non-constant and L(f) = Ess(f).
  bool is_read_once(const BoolFn& f) const;

  std::size_t function_count() const { return table_.size(); }
  const std::map<BoolFn, ComplexityEntry>& entries() const { return table_; }

  // CSV with columns fn,L,Ess,read_once,witness.
  std::string to_csv() const;

 private:
  int k_;
  int max_size_;
  std::map<BoolFn, ComplexityEntry> table_;
};

// Number of distinct functions obtainable from f by permuting the k
// variables. Guarded to k <= 8.
std::uint64_t orbit_size(const BoolFn& f, int k);

}  // namespace andor
