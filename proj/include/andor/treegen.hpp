#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "andor/exprtree.hpp"
#include "andor/rng.hpp"

namespace andor {

using BigInt = boost::multiprecision::cpp_int;

// Offspring law: p[i] = P(xi = i). p[1] must be 0 (no unary nodes); a law
// flagged critical must have mean 1.
struct OffspringDist {
  std::vector<double> p;
  bool critical = false;

  void validate() const;  // throws std::invalid_argument on violations
  double mean() const;
  double second_moment() const;

  // Inverse-CDF sampling on the fixed enumeration order 0,1,2,...
  int sample(Rng& rng) const;
  // Size-biased draw: P(i) proportional to i*p[i].
  int sample_size_biased(Rng& rng) const;

  static OffspringDist catalan();  // p0 = p2 = 1/2
  static OffspringDist from_json_text(const std::string& text);
  std::string to_json_text() const;
};

// Weights w0=k, w1=0, wi=1 normalized to the critical offspring law of the
// uniform n-node and/or tree on k variables. Geometric tail truncated below
// 1e-17 per-term mass.
OffspringDist associative_offspring(int k);

// Unconditioned branching-process tree. Returns nullopt when the generation
// would exceed node_cap (caller retries or treats the draw as censored).
std::optional<TreeShape> sample_gw(const OffspringDist& d, Rng& rng,
                                   std::uint64_t node_cap);

enum class SizeMode { TotalNodes, Leaves };

// Whether a tree of the requested size exists under d (arity-monoid check).
bool size_attainable(const OffspringDist& d, int n, SizeMode mode);

// Exact conditional law by rejection. retry_budget bounds the total number
// of nodes generated across attempts; throws std::runtime_error when
// exhausted and std::invalid_argument for unattainable sizes.
TreeShape sample_gw_conditioned(const OffspringDist& d, int n, SizeMode mode,
                                Rng& rng,
                                std::uint64_t retry_budget = 10'000'000);

// Complete binary tree with 2^h leaves at depth h.
TreeShape balanced_binary(int h);

// Shape of a random binary search tree with n-1 internal keys whose n
// external positions are the leaves.
TreeShape sample_bst(int n, Rng& rng);

// Ford alpha-model tree with n leaves grown by weighted edge insertion
// (internal edges weighted alpha, external 1-alpha, root-edge internal).
// Edge selection is by cumulative-weight inversion on a fixed enumeration
// order; the side of each new leaf is a fair coin so the plane law is
// exchangeable.
TreeShape sample_alpha(int n, double alpha, Rng& rng);

// Root split law q_n^alpha(j) of the alpha tree, j in 1..n-1.
double alpha_split_pmf(int n, double alpha, int j);

// Draws j ~ q_n^alpha by cumulative inversion over the order 1, n-1, 2,
// n-2, ...; *steps, when given, is incremented per term (work accounting).
// With max_steps > 0 the scan gives up and returns -1 once exceeded.
std::int64_t sample_alpha_split(std::int64_t n, double alpha, Rng& rng,
                                std::uint64_t* steps = nullptr,
                                std::uint64_t max_steps = 0);

// Size law of the subtrees hanging off the alpha spine:
// P(N = m) = alpha * Gamma(m - alpha) / (m! * Gamma(1 - alpha)), m >= 1.
// Sampled by inverting the closed-form tail.
std::int64_t sample_alpha_hung_size(double alpha, Rng& rng);
double alpha_hung_size_pmf(double alpha, std::int64_t m);

// Split distribution q_n^{alpha,gamma} over partitions of n into >= 2 parts
// (non-increasing, summing to n). 0 < gamma <= alpha <= 1.
double alpha_gamma_split_pmf(int n, double alpha, double gamma,
                             const std::vector<int>& partition);

// All partitions of n into at least min_parts parts, non-increasing.
std::vector<std::vector<int>> partitions_of(int n, int min_parts = 2);

// Exact draw from q_n^{alpha,gamma} by enumeration; n <= 20.
std::vector<int> sample_alpha_gamma_partition(int n, double alpha, double gamma,
                                              Rng& rng);

// Genealogical tree of the fragmentation of n items: the root block of size
// n splits by the user-supplied law (which must return >= 2 parts summing to
// the block size for every block of size >= 2); blocks of size 1 are leaves.
using SplitSampler = std::function<std::vector<int>(int block_size, Rng& rng)>;
TreeShape sample_fragmentation(int n, const SplitSampler& split, Rng& rng);

// Wedderburn-Etherington: y[n] = number of rooted unordered binary trees
// with n leaves, exact. Returned vector is 1-indexed (y[0] unused).
std::vector<BigInt> unordered_binary_counts(int nmax);

// P(smaller root subtree = i) = y_{n-i} y_i / y_n for 1 <= i < n/2.
double unordered_split_pmf(const std::vector<BigInt>& y, int n, int i);
double unordered_split_pmf(int n, int i);

// One level of the local limit of conditioned branching-process trees: a
// spine node has a size-biased number of children, one of which continues
// the spine, the others rooting unconditioned trees.
struct SpineLevel {
  int degree = 0;       // size-biased child count
  int spine_index = 0;  // position of the spine child among the children
  std::vector<TreeShape> hung;
};

class SpineModel {
 public:
  SpineModel(OffspringDist d, std::uint64_t node_cap = 1 << 20);
  // Hung trees are materialized; draws exceeding the node cap are retried,
  // throwing after too many failures.
  SpineLevel next_level(Rng& rng) const;
  const OffspringDist& offspring() const { return dist_; }

 private:
  OffspringDist dist_;
  std::uint64_t node_cap_;
};

double big_ratio_to_double(const BigInt& num, const BigInt& den);

}  // namespace andor
