#include "andor/limitdist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "andor/parallel.hpp"
#include "json.hpp"

namespace andor {

namespace {
long long gcd_ll(long long a, long long b) {
  while (b) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

constexpr std::uint64_t kChunk = 4096;

double binom_se(std::uint64_t count, std::uint64_t n) {
  if (n == 0) return 0;
  double p = static_cast<double>(count) / static_cast<double>(n);
  return std::sqrt(p * (1 - p) / static_cast<double>(n));
}
}  // namespace

Rat Rat::of(long long n, long long d) {
  if (d == 0) throw std::invalid_argument("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  long long g = gcd_ll(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  return Rat{n, d};
}

Rat Rat::operator+(const Rat& o) const {
  long long gden = gcd_ll(den, o.den);
  __int128 lnum = static_cast<__int128>(num) * (o.den / gden) +
                  static_cast<__int128>(o.num) * (den / gden);
  __int128 lden = static_cast<__int128>(den / gden) * o.den;
  if (lden > INT64_MAX || lnum > INT64_MAX || lnum < INT64_MIN)
    throw std::overflow_error("rational overflow");
  return Rat::of(static_cast<long long>(lnum), static_cast<long long>(lden));
}

Rat Rat::operator-(const Rat& o) const { return *this + Rat{-o.num, o.den}; }

Rat Rat::operator*(const Rat& o) const {
  long long g1 = gcd_ll(num, o.den);
  long long g2 = gcd_ll(o.num, den);
  long long n = (num / g1) * (o.num / g2);
  long long d = (den / g2) * (o.den / g1);
  return Rat::of(n, d);
}

std::uint64_t DistEstimate::count(const BoolFn& f) const {
  auto it = entries.find(f);
  return it == entries.end() ? 0 : it->second.count;
}

double DistEstimate::prob(const BoolFn& f) const {
  auto it = entries.find(f);
  return it == entries.end() ? 0.0 : it->second.p;
}

double DistEstimate::stderr_of(const BoolFn& f) const {
  auto it = entries.find(f);
  if (it == entries.end()) return binom_se(0, trials);
  return it->second.stderr_;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string DistEstimate::to_json() const {
  nlohmann::json j;
  j["model"] = model;
  j["k"] = k;
  j["trials"] = trials;
  j["seed"] = seed;
  j["exact"] = exact;
  j["unclassified"] = unclassified;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [fn, e] : entries) {
    nlohmann::json row;
    row["fn"] = fn.to_text();
    row["count"] = e.count;
    row["p"] = e.p;
    row["stderr"] = e.stderr_;
    arr.push_back(row);
  }
  j["entries"] = arr;
  return j.dump(2);
}

TreeModel TreeModel::fixed(TreeShape shape, std::string name) {
  TreeModel m;
  m.kind = Kind::FixedShape;
  m.shape = std::move(shape);
  m.name = std::move(name);
  return m;
}

TreeModel TreeModel::gw_conditioned(OffspringDist d, int n, SizeMode mode,
                                    std::string name) {
  d.validate();
  TreeModel m;
  m.kind = Kind::GwConditioned;
  m.offspring = std::move(d);
  m.n = n;
  m.mode = mode;
  m.name = std::move(name);
  return m;
}

TreeModel TreeModel::bst(int n) {
  TreeModel m;
  m.kind = Kind::Bst;
  m.n = n;
  m.name = "bst:" + std::to_string(n);
  return m;
}

TreeModel TreeModel::ford_alpha(int n, double a) {
  TreeModel m;
  m.kind = Kind::Alpha;
  m.n = n;
  m.alpha = a;
  m.name = "alpha:" + std::to_string(a) + ":" + std::to_string(n);
  return m;
}

TreeShape TreeModel::sample(Rng& rng) const {
  switch (kind) {
    case Kind::FixedShape:
      return shape;
    case Kind::GwConditioned:
      return sample_gw_conditioned(offspring, n, mode, rng);
    case Kind::Bst:
      return sample_bst(n, rng);
    case Kind::Alpha:
      return sample_alpha(n, alpha, rng);
  }
  throw std::logic_error("bad model kind");
}

namespace {

std::uint64_t literal_word(int k, int var, bool neg) {
  std::uint64_t w = 0;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << k); ++a) {
    bool v = (a >> (var - 1)) & 1;
    if (neg ? !v : v) w |= std::uint64_t{1} << a;
  }
  return w;
}

// Word-sized fast path for k <= 6.
std::uint64_t eval_labelling_word(const TreeShape& t, int k,
                                  const std::vector<Gate>& gates,
                                  const std::vector<Literal>& lits,
                                  const std::vector<int>& rev_preorder) {
  std::vector<std::uint64_t> slot(t.nodes.size(), 0);
  for (int v : rev_preorder) {
    if (t.is_leaf(v)) {
      slot[v] = literal_word(k, lits[v].var, lits[v].negated);
    } else {
      const auto& ch = t.nodes[v].children;
      std::uint64_t acc = slot[ch[0]];
      if (gates[v] == Gate::And)
        for (std::size_t i = 1; i < ch.size(); ++i) acc &= slot[ch[i]];
      else
        for (std::size_t i = 1; i < ch.size(); ++i) acc |= slot[ch[i]];
      slot[v] = acc;
    }
  }
  return slot[t.root()];
}

std::vector<int> reverse_preorder(const TreeShape& t) {
  std::vector<int> order;
  order.reserve(t.nodes.size());
  std::vector<int> stack{t.root()};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int c : t.nodes[v].children) stack.push_back(c);
  }
  std::reverse(order.begin(), order.end());
  return order;
}

}  // namespace

BoolFn eval_random_labelling(const TreeShape& t, int k, Rng& rng) {
  // Labels are drawn in node-id order, then the tree is evaluated.
  std::vector<Gate> gates(t.nodes.size(), Gate::And);
  std::vector<Literal> lits(t.nodes.size());
  for (int v = 0; v < t.node_count(); ++v) {
    if (t.is_leaf(v)) {
      std::uint64_t u = rng.below(2 * static_cast<std::uint64_t>(k));
      lits[v] = Literal{static_cast<int>(u / 2) + 1, (u & 1) != 0};
    } else {
      gates[v] = rng.coin() ? Gate::And : Gate::Or;
    }
  }
  std::vector<int> order = reverse_preorder(t);
  if (k <= 6) {
    std::uint64_t w = eval_labelling_word(t, k, gates, lits, order);
    std::vector<std::uint64_t> words{w};
    return BoolFn::from_words(k, words);
  }
  AndOrTree tree;
  tree.shape = t;
  tree.gates = std::move(gates);
  tree.leaf_labels = std::move(lits);
  return eval_tree(tree, k);
}

DistEstimate exact_dist(const TreeShape& t, int k) {
  std::vector<int> leaves, internals;
  for (int v = 0; v < t.node_count(); ++v)
    (t.is_leaf(v) ? leaves : internals).push_back(v);
  double cost = std::pow(2.0, internals.size()) *
                std::pow(2.0 * k, static_cast<double>(leaves.size()));
  if (cost > 1e7)
    throw std::invalid_argument("exact enumeration exceeds the cost guard");

  DistEstimate out;
  out.model = "exact:" + shape_key(t);
  out.k = k;
  out.exact = true;

  std::vector<Gate> gates(t.nodes.size(), Gate::And);
  std::vector<Literal> lits(t.nodes.size(), Literal{1, false});
  std::vector<int> order = reverse_preorder(t);
  std::uint64_t gate_combos = std::uint64_t{1} << internals.size();
  std::uint64_t lit_count = 2 * static_cast<std::uint64_t>(k);

  std::map<BoolFn, std::uint64_t> counts;
  for (std::uint64_t gbits = 0; gbits < gate_combos; ++gbits) {
    for (std::size_t i = 0; i < internals.size(); ++i)
      gates[internals[i]] = (gbits >> i) & 1 ? Gate::Or : Gate::And;
    std::vector<std::uint64_t> digits(leaves.size(), 0);
    while (true) {
      for (std::size_t i = 0; i < leaves.size(); ++i)
        lits[leaves[i]] =
            Literal{static_cast<int>(digits[i] / 2) + 1, (digits[i] & 1) != 0};
      BoolFn f = [&] {
        if (k <= 6) {
          std::uint64_t w = eval_labelling_word(t, k, gates, lits, order);
          return BoolFn::from_words(k, {w});
        }
        AndOrTree tree;
        tree.shape = t;
        tree.gates = gates;
        tree.leaf_labels = lits;
        return eval_tree(tree, k);
      }();
      ++counts[f];
      std::size_t pos = digits.size();
      bool done = digits.empty();
      while (pos > 0) {
        --pos;
        if (++digits[pos] < lit_count) break;
        digits[pos] = 0;
        if (pos == 0) done = true;
      }
      if (done) break;
    }
  }
  std::uint64_t total = 0;
  for (const auto& [f, c] : counts) total += c;
  out.trials = total;
  for (const auto& [f, c] : counts)
    out.entries[f] = DistEntry{c, static_cast<double>(c) / static_cast<double>(total), 0.0};
  return out;
}

namespace {

struct HistPartial {
  std::map<BoolFn, std::uint64_t> counts;
  std::uint64_t unclassified = 0;
};

DistEstimate histogram_to_estimate(HistPartial hist, std::string model, int k,
                                   std::uint64_t trials, std::uint64_t seed) {
  DistEstimate out;
  out.model = std::move(model);
  out.k = k;
  out.trials = trials;
  out.seed = seed;
  out.unclassified = hist.unclassified;
  for (const auto& [f, c] : hist.counts) {
    double p = static_cast<double>(c) / static_cast<double>(trials);
    out.entries[f] = DistEntry{c, p, binom_se(c, trials)};
  }
  return out;
}

}  // namespace

DistEstimate mc_dist(const TreeModel& model, int k, std::uint64_t trials,
                     std::uint64_t seed, int threads) {
  auto hist = run_chunked<HistPartial>(
      trials, kChunk, threads,
      [&](std::uint64_t begin, std::uint64_t end, HistPartial& part) {
        for (std::uint64_t i = begin; i < end; ++i) {
          Rng rng = task_rng(seed, i);
          TreeShape shape = model.sample(rng);
          ++part.counts[eval_random_labelling(shape, k, rng)];
        }
      },
      [](HistPartial& acc, HistPartial& part) {
        for (auto& [f, c] : part.counts) acc.counts[f] += c;
        acc.unclassified += part.unclassified;
      });
  return histogram_to_estimate(std::move(hist), model.name, k, trials, seed);
}

DistEstimate mc_dist_spine(const SpineSpec& spec, int k, std::uint64_t trials,
                           std::uint64_t seed, SpineEvaluator::Caps caps,
                           int threads) {
  auto hist = run_chunked<HistPartial>(
      trials, kChunk, threads,
      [&](std::uint64_t begin, std::uint64_t end, HistPartial& part) {
        for (std::uint64_t i = begin; i < end; ++i) {
          SpineEvaluator ev(spec, k, task_rng(seed, i), caps);
          if (auto f = ev.full_function())
            ++part.counts[*f];
          else
            ++part.unclassified;
        }
      },
      [](HistPartial& acc, HistPartial& part) {
        for (auto& [f, c] : part.counts) acc.counts[f] += c;
        acc.unclassified += part.unclassified;
      });
  std::string name = spec.kind == SpineSpec::Kind::FordAlpha
                         ? "spine:alpha:" + std::to_string(spec.alpha)
                         : "spine:gw";
  return histogram_to_estimate(std::move(hist), name, k, trials, seed);
}

std::optional<BoolFn> eval_spine(const SpineSpec& spec, int k, Rng rng,
                                 SpineEvaluator::Caps caps) {
  SpineEvaluator ev(spec, k, rng, caps);
  return ev.full_function();
}

namespace {

std::uint64_t assignment_index(const std::vector<int>& a) {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i]) idx |= std::uint64_t{1} << i;
  return idx;
}

// P^{10} by the root-degree recursion; other sign pairs follow from the
// labelling symmetries P^{01} = P^{10} and P^{11} = P^{00} = 1/2 - P^{10}.
Rat pair_prob10(const TreeShape& t, int v, int k, int hamming) {
  if (t.is_leaf(v)) return Rat::of(hamming, 2 * k);
  const auto& ch = t.nodes[v].children;
  Rat half = Rat::of(1, 2);
  Rat prod = Rat::of(1, 1);
  for (int c : ch) prod = prod * (half - pair_prob10(t, c, k, hamming));
  long long denom = 1;
  for (std::size_t i = 0; i < ch.size(); ++i) denom *= 2;
  return Rat::of(1, denom) - prod;
}

}  // namespace

Rat pair_prob(const TreeShape& t, int k, const std::vector<int>& a,
              const std::vector<int>& b, bool alpha, bool beta) {
  if (a.size() != static_cast<std::size_t>(k) || b.size() != a.size())
    throw std::invalid_argument("assignments must have length k");
  if (a == b) throw std::invalid_argument("assignments must be distinct");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if ((a[i] != 0) != (b[i] != 0)) ++d;
  Rat p10 = pair_prob10(t, t.root(), k, d);
  if (alpha != beta) return p10;
  return Rat::of(1, 2) - p10;  // P^{11} = P^{00}
}

Rat pair_prob_from_dist(const DistEstimate& exact, const std::vector<int>& a,
                        const std::vector<int>& b, bool alpha, bool beta) {
  if (!exact.exact) throw std::invalid_argument("needs an exact distribution");
  std::uint64_t ia = assignment_index(a), ib = assignment_index(b);
  long long matching = 0;
  for (const auto& [f, e] : exact.entries)
    if (f.bit(ia) == alpha && f.bit(ib) == beta)
      matching += static_cast<long long>(e.count);
  return Rat::of(matching, static_cast<long long>(exact.trials));
}

std::vector<double> u_sequence(double u1, int sigma_max) {
  if (u1 < 0 || u1 > 0.5)
    throw std::invalid_argument("u1 must lie in [0, 1/2]");
  if (sigma_max < 1) throw std::invalid_argument("sigma_max must be >= 1");
  std::vector<double> u(sigma_max);
  u[0] = u1;
  for (int i = 1; i < sigma_max; ++i) u[i] = u[i - 1] - u[i - 1] * u[i - 1];
  return u;
}

NonconstantReport nonconstant_lower_bound_check(const TreeShape& t, int k,
                                                std::uint64_t trials,
                                                std::uint64_t seed,
                                                int threads) {
  struct Partial {
    std::uint64_t nonconstant = 0;
  };
  auto res = run_chunked<Partial>(
      trials, kChunk, threads,
      [&](std::uint64_t begin, std::uint64_t end, Partial& part) {
        for (std::uint64_t i = begin; i < end; ++i) {
          Rng rng = task_rng(seed, i);
          if (!eval_random_labelling(t, k, rng).is_constant()) ++part.nonconstant;
        }
      },
      [](Partial& acc, Partial& p) { acc.nonconstant += p.nonconstant; });

  NonconstantReport rep;
  rep.saturation = saturation_level(t);
  rep.trials = trials;
  rep.p_nonconstant = static_cast<double>(res.nonconstant) / static_cast<double>(trials);
  rep.stderr_ = binom_se(res.nonconstant, trials);
  rep.floor_ = std::pow(2.0, -rep.saturation);
  rep.pass = rep.p_nonconstant >= rep.floor_ - 3 * rep.stderr_;
  return rep;
}

double ClassifyCounts::p_hat(std::size_t i) const {
  return trials ? static_cast<double>(matches[i]) / static_cast<double>(trials) : 0;
}

double ClassifyCounts::stderr_of(std::size_t i) const {
  return binom_se(matches[i], trials);
}

ClassifyCounts spine_target_counts(const SpineSpec& spec, int k,
                                   const std::vector<BoolFn>& targets,
                                   std::uint64_t trials, std::uint64_t seed,
                                   SpineEvaluator::Caps caps, int threads) {
  struct Partial {
    std::vector<std::uint64_t> matches;
    std::uint64_t unclassified = 0;
  };
  auto res = run_chunked<Partial>(
      trials, kChunk, threads,
      [&](std::uint64_t begin, std::uint64_t end, Partial& part) {
        part.matches.assign(targets.size(), 0);
        for (std::uint64_t i = begin; i < end; ++i) {
          SpineEvaluator ev(spec, k, task_rng(seed, i), caps);
          std::vector<int> cls = ev.classify(targets);
          bool any_unknown = false;
          for (std::size_t s = 0; s < targets.size(); ++s) {
            if (cls[s] == 1) ++part.matches[s];
            if (cls[s] == -1) any_unknown = true;
          }
          if (any_unknown) ++part.unclassified;
        }
      },
      [&](Partial& acc, Partial& p) {
        if (acc.matches.empty()) acc.matches.assign(targets.size(), 0);
        if (p.matches.empty()) return;
        for (std::size_t s = 0; s < targets.size(); ++s)
          acc.matches[s] += p.matches[s];
        acc.unclassified += p.unclassified;
      });
  ClassifyCounts out;
  out.matches = res.matches.empty() ? std::vector<std::uint64_t>(targets.size(), 0)
                                    : res.matches;
  out.unclassified = res.unclassified;
  out.trials = trials;
  return out;
}

ForestStats forest_stats(const SpineSpec& spec, int k, std::uint64_t trials,
                         std::uint64_t seed, int threads,
                         std::uint64_t work_budget) {
  struct Partial {
    double sum_w = 0, sum_w2 = 0;
    double sum_l = 0, sum_l2 = 0;
    double sum_l2sq = 0, sum_l4 = 0;
    std::uint64_t censored = 0;
  };
  auto res = run_chunked<Partial>(
      trials, kChunk, threads,
      [&](std::uint64_t begin, std::uint64_t end, Partial& part) {
        for (std::uint64_t i = begin; i < end; ++i) {
          ForestSample s =
              sample_hanging_forest(spec, k, task_rng(seed, i), work_budget);
          if (s.censored) {
            ++part.censored;
            continue;
          }
          double w = s.has_pair ? static_cast<double>(s.min_pair_count) *
                                      std::pow(2.0, -s.min_branch_nodes)
                                : 0.0;
          double l = static_cast<double>(s.trim_leaves);
          part.sum_w += w;
          part.sum_w2 += w * w;
          part.sum_l += l;
          part.sum_l2 += l * l;
          part.sum_l2sq += l * l;
          part.sum_l4 += l * l * l * l;
        }
      },
      [](Partial& acc, Partial& p) {
        acc.sum_w += p.sum_w;
        acc.sum_w2 += p.sum_w2;
        acc.sum_l += p.sum_l;
        acc.sum_l2 += p.sum_l2;
        acc.sum_l2sq += p.sum_l2sq;
        acc.sum_l4 += p.sum_l4;
        acc.censored += p.censored;
      });

  ForestStats out;
  out.trials = trials;
  out.censored = res.censored;
  double n = static_cast<double>(trials - res.censored);
  if (n < 2) return out;
  auto mean_se = [n](double sum, double sumsq, double& mean, double& se) {
    mean = sum / n;
    double var = std::max(0.0, sumsq / n - mean * mean);
    se = std::sqrt(var / n);
  };
  mean_se(res.sum_w, res.sum_w2, out.mean_pair_weight, out.se_pair_weight);
  mean_se(res.sum_l, res.sum_l2, out.mean_trim, out.se_trim);
  mean_se(res.sum_l2sq, res.sum_l4, out.mean_trim_sq, out.se_trim_sq);
  return out;
}

SandwichReport theta_true_sandwich(const SpineSpec& spec, int k,
                                   std::uint64_t trials, std::uint64_t seed,
                                   SpineEvaluator::Caps caps, int threads) {
  std::vector<BoolFn> targets{BoolFn::constant(k, true), BoolFn::constant(k, false)};
  ClassifyCounts counts =
      spine_target_counts(spec, k, targets, trials, seed, caps, threads);
  std::uint64_t forest_seed = seed ^ 0x9e3779b97f4a7c15ULL;
  ForestStats fs = forest_stats(spec, k, trials, forest_seed, threads);

  SandwichReport rep;
  rep.k = k;
  rep.p_true = counts.p_hat(0);
  rep.se_true = counts.stderr_of(0);
  rep.p_false = counts.p_hat(1);
  rep.se_false = counts.stderr_of(1);
  rep.unclassified = counts.unclassified;
  rep.lower = fs.mean_pair_weight / k;
  rep.se_lower = fs.se_pair_weight / k;
  constexpr double two_e = 2 * 2.718281828459045235;
  rep.upper = ((two_e + 1) * fs.mean_trim + fs.mean_trim_sq) / k;
  rep.se_upper = std::sqrt(std::pow((two_e + 1) * fs.se_trim, 2) +
                           std::pow(fs.se_trim_sq, 2)) / k;
  rep.pass_lower =
      rep.p_true >= rep.lower - 3 * std::sqrt(rep.se_lower * rep.se_lower +
                                              rep.se_true * rep.se_true);
  rep.pass_upper =
      rep.p_true <= rep.upper + 3 * std::sqrt(rep.se_upper * rep.se_upper +
                                              rep.se_true * rep.se_true);
  double se_diff = std::sqrt(rep.se_true * rep.se_true + rep.se_false * rep.se_false);
  rep.pass_symmetry = std::abs(rep.p_true - rep.p_false) <= 4 * se_diff;
  return rep;
}

std::string ScalingReport::to_csv() const {
  std::string out = "k,p_hat,stderr,log_k,log_p\n";
  for (const auto& pt : points) {
    out += std::to_string(pt.k);
    out += ',';
    out += format_double(pt.p_hat);
    out += ',';
    out += format_double(pt.stderr_);
    out += ',';
    out += format_double(pt.excluded ? 0.0 : std::log(static_cast<double>(pt.k)));
    out += ',';
    out += format_double(pt.excluded ? 0.0 : std::log(pt.p_hat));
    out += '\n';
  }
  out += "slope," + format_double(slope) + ",intercept," + format_double(intercept) +
         ",r2," + format_double(r2) + "\n";
  return out;
}

ScalingReport scaling_exponent(const SpineSpec& spec, const BoolFn& f,
                               const std::vector<int>& ks,
                               std::uint64_t trials_per_k, std::uint64_t seed,
                               SpineEvaluator::Caps caps, int threads) {
  ScalingReport rep;
  std::vector<double> xs, ys;
  for (int k : ks) {
    if (k < f.arity())
      throw std::invalid_argument("each k must be at least the target arity");
    std::uint64_t sub_seed = seed;
    std::uint64_t mix = splitmix64(sub_seed);
    sub_seed = mix ^ (0xa0761d6478bd642fULL * static_cast<std::uint64_t>(k));
    std::vector<BoolFn> targets{f.extend(k)};
    ClassifyCounts counts =
        spine_target_counts(spec, k, targets, trials_per_k, sub_seed, caps, threads);
    ScalingPoint pt;
    pt.k = k;
    pt.count = counts.matches[0];
    pt.trials = trials_per_k;
    pt.unclassified = counts.unclassified;
    pt.p_hat = counts.p_hat(0);
    pt.stderr_ = counts.stderr_of(0);
    pt.excluded = counts.matches[0] == 0;
    if (pt.excluded)
      rep.warning += "k=" + std::to_string(k) + " had zero matches, excluded; ";
    else {
      xs.push_back(std::log(static_cast<double>(k)));
      ys.push_back(std::log(pt.p_hat));
    }
    rep.points.push_back(pt);
  }
  std::size_t n = xs.size();
  if (n >= 2) {
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
      syy += (ys[i] - my) * (ys[i] - my);
    }
    rep.slope = sxy / sxx;
    rep.intercept = my - rep.slope * mx;
    rep.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  } else {
    rep.warning += "fewer than two usable points, no regression; ";
  }
  return rep;
}

RepetitionReport repetition_bound_check(const SpineSpec& spec, int k,
                                        std::uint64_t trials,
                                        std::uint64_t seed, int threads,
                                        std::uint64_t work_budget) {
  struct Partial {
    std::uint64_t repeated = 0, censored = 0;
    double sum_l = 0, sum_l2 = 0;
    double sum_b = 0, sum_b2 = 0;  // per-trial bound statistic
  };
  constexpr double two_e = 2 * 2.718281828459045235;
  auto res = run_chunked<Partial>(
      trials, kChunk, threads,
      [&](std::uint64_t begin, std::uint64_t end, Partial& part) {
        for (std::uint64_t i = begin; i < end; ++i) {
          SpineTrimStats s =
              spine_trim_stats(spec, k, task_rng(seed, i), work_budget);
          if (s.censored) {
            ++part.censored;
            continue;
          }
          if (s.repetitions() >= 1) ++part.repeated;
          double l = static_cast<double>(s.trim_leaves);
          part.sum_l += l;
          part.sum_l2 += l * l;
          double b = (l * l + two_e * l) / k;
          part.sum_b += b;
          part.sum_b2 += b * b;
        }
      },
      [](Partial& acc, Partial& p) {
        acc.repeated += p.repeated;
        acc.censored += p.censored;
        acc.sum_l += p.sum_l;
        acc.sum_l2 += p.sum_l2;
        acc.sum_b += p.sum_b;
        acc.sum_b2 += p.sum_b2;
      });

  RepetitionReport rep;
  rep.k = k;
  rep.trials = trials;
  rep.censored = res.censored;
  double n = static_cast<double>(trials - res.censored);
  if (n < 2) return rep;
  rep.p_repeat = static_cast<double>(res.repeated) / n;
  rep.se_p = std::sqrt(std::max(0.0, rep.p_repeat * (1 - rep.p_repeat)) / n);
  rep.trim_mean = res.sum_l / n;
  rep.trim_sq_mean = res.sum_l2 / n;
  rep.bound = (rep.trim_sq_mean + two_e * rep.trim_mean) / k;
  double bmean = res.sum_b / n;
  double bvar = std::max(0.0, res.sum_b2 / n - bmean * bmean);
  rep.se_bound = std::sqrt(bvar / n);
  rep.pass = rep.p_repeat <=
             rep.bound + 3 * std::sqrt(rep.se_bound * rep.se_bound + rep.se_p * rep.se_p);
  return rep;
}

}  // namespace andor
