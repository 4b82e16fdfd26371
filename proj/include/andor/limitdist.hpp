#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "andor/boolfn.hpp"
#include "andor/exprtree.hpp"
#include "andor/lazytree.hpp"
#include "andor/treegen.hpp"

namespace andor {

// Exact rational arithmetic for the enumeration oracles. Values stay tiny
// (denominators divide 2^edges * (2k)^leaves), int64 with reduction suffices.
struct Rat {
  long long num = 0;
  long long den = 1;

  static Rat of(long long n, long long d);
  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct DistEntry {
  std::uint64_t count = 0;
  double p = 0;
  double stderr_ = 0;
};

// Distribution over Boolean functions from one experiment. For exact
// enumerations `trials` is the number of labellings and stderr is 0.
struct DistEstimate {
  std::string model;
  int k = 1;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  bool exact = false;
  std::uint64_t unclassified = 0;
  std::map<BoolFn, DistEntry> entries;

  std::uint64_t count(const BoolFn& f) const;
  double prob(const BoolFn& f) const;
  double stderr_of(const BoolFn& f) const;
  std::string to_json() const;
};

// Finite-tree sampling models (one shape draw per trial).
struct TreeModel {
  enum class Kind { FixedShape, GwConditioned, Bst, Alpha };
  Kind kind = Kind::FixedShape;
  std::string name;
  TreeShape shape;          // FixedShape
  OffspringDist offspring;  // GwConditioned
  SizeMode mode = SizeMode::Leaves;
  int n = 1;                // target size (GwConditioned, Bst, Alpha)
  double alpha = 0.5;

  static TreeModel fixed(TreeShape shape, std::string name);
  static TreeModel gw_conditioned(OffspringDist d, int n, SizeMode mode,
                                  std::string name);
  static TreeModel bst(int n);
  static TreeModel ford_alpha(int n, double a);

  TreeShape sample(Rng& rng) const;
};

// Uniformly labels the shape and evaluates it, without materializing the
// labelled tree.
BoolFn eval_random_labelling(const TreeShape& t, int k, Rng& rng);

// Exact distribution induced by uniform labelling of one shape: full
// enumeration of all 2^internal * (2k)^leaves labellings. Guarded to 1e7.
DistEstimate exact_dist(const TreeShape& t, int k);

// Monte Carlo over a finite-tree model: fresh shape and labelling per trial.
DistEstimate mc_dist(const TreeModel& model, int k, std::uint64_t trials,
                     std::uint64_t seed, int threads);

// Monte Carlo over the labelled local limit; non-stabilized trials are
// reported in `unclassified`, never folded into a function's count.
DistEstimate mc_dist_spine(const SpineSpec& spec, int k, std::uint64_t trials,
                           std::uint64_t seed, SpineEvaluator::Caps caps,
                           int threads);

// Single labelled draw of the local limit.
std::optional<BoolFn> eval_spine(const SpineSpec& spec, int k, Rng rng,
                                 SpineEvaluator::Caps caps);

// P(f[t-hat](a) = alpha and f[t-hat](b) = beta) for distinct assignments,
// by the root-degree recursion with leaf base case d(a,b)/(2k).
Rat pair_prob(const TreeShape& t, int k, const std::vector<int>& a,
              const std::vector<int>& b, bool alpha, bool beta);

// Same probability read off an exact enumeration (the oracle route).
Rat pair_prob_from_dist(const DistEstimate& exact, const std::vector<int>& a,
                        const std::vector<int>& b, bool alpha, bool beta);

// u_{s+1} = g(u_s) with g(x) = x - x^2; returns u_1..u_sigma_max.
std::vector<double> u_sequence(double u1, int sigma_max);

struct NonconstantReport {
  int saturation = 0;
  std::uint64_t trials = 0;
  double p_nonconstant = 0;
  double stderr_ = 0;
  double floor_ = 0;  // 2^-saturation
  bool pass = false;  // p_nonconstant >= floor - 3*stderr
};

NonconstantReport nonconstant_lower_bound_check(const TreeShape& t, int k,
                                                std::uint64_t trials,
                                                std::uint64_t seed, int threads);

// Per-target match counts over spine trials (classification fast path).
struct ClassifyCounts {
  std::vector<std::uint64_t> matches;
  std::uint64_t unclassified = 0;
  std::uint64_t trials = 0;

  double p_hat(std::size_t i) const;
  double stderr_of(std::size_t i) const;
};

ClassifyCounts spine_target_counts(const SpineSpec& spec, int k,
                                   const std::vector<BoolFn>& targets,
                                   std::uint64_t trials, std::uint64_t seed,
                                   SpineEvaluator::Caps caps, int threads);

// Aggregates over hanging forests for the constant-function bounds.
struct ForestStats {
  std::uint64_t trials = 0;
  std::uint64_t censored = 0;
  double mean_pair_weight = 0;  // E[N_A / 2^{C_A}]
  double se_pair_weight = 0;
  double mean_trim = 0;  // E[L]
  double se_trim = 0;
  double mean_trim_sq = 0;  // E[L^2]
  double se_trim_sq = 0;
};

ForestStats forest_stats(const SpineSpec& spec, int k, std::uint64_t trials,
                         std::uint64_t seed, int threads,
                         std::uint64_t work_budget = 4'000'000);

// (1/k) E[N/2^C]  <=  P(True)  <=  ((2e+1) E[L] + E[L^2]) / k, with Monte
// Carlo slack; also checks P(True) = P(False) within 4 combined stderr.
struct SandwichReport {
  int k = 0;
  double p_true = 0, se_true = 0;
  double p_false = 0, se_false = 0;
  double lower = 0, se_lower = 0;
  double upper = 0, se_upper = 0;
  std::uint64_t unclassified = 0;
  bool pass_lower = false, pass_upper = false, pass_symmetry = false;
  bool pass() const { return pass_lower && pass_upper && pass_symmetry; }
};

SandwichReport theta_true_sandwich(const SpineSpec& spec, int k,
                                   std::uint64_t trials, std::uint64_t seed,
                                   SpineEvaluator::Caps caps, int threads);

struct ScalingPoint {
  int k = 0;
  std::uint64_t count = 0;
  std::uint64_t trials = 0;
  std::uint64_t unclassified = 0;
  double p_hat = 0;
  double stderr_ = 0;
  bool excluded = false;  // p_hat = 0, left out of the regression
};

struct ScalingReport {
  std::vector<ScalingPoint> points;
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  std::string warning;
  std::string to_csv() const;
};

// log p_hat_k(extend(f, k)) regressed on log k by ordinary least squares.
ScalingReport scaling_exponent(const SpineSpec& spec, const BoolFn& f,
                               const std::vector<int>& ks,
                               std::uint64_t trials_per_k, std::uint64_t seed,
                               SpineEvaluator::Caps caps, int threads);

// Moment bound on repetitions at order 1:
// P(trim has >= 1 repetition) <= (E||trim||^2 + 2e E||trim||) / k.
struct RepetitionReport {
  int k = 0;
  std::uint64_t trials = 0;
  std::uint64_t censored = 0;
  double p_repeat = 0, se_p = 0;
  double trim_mean = 0, trim_sq_mean = 0;
  double bound = 0, se_bound = 0;
  bool pass = false;
};

RepetitionReport repetition_bound_check(const SpineSpec& spec, int k,
                                        std::uint64_t trials,
                                        std::uint64_t seed, int threads,
                                        std::uint64_t work_budget = 4'000'000);

// Fixed "%.17g" rendering so outputs are byte-stable.
std::string format_double(double v);

}  // namespace andor
