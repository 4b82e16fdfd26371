#include "andor/treegen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "json.hpp"

namespace andor {

void OffspringDist::validate() const {
  if (p.empty()) throw std::invalid_argument("offspring law is empty");
  double sum = 0;
  for (double v : p) {
    if (v < 0 || !std::isfinite(v))
      throw std::invalid_argument("offspring probabilities must be finite and >= 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("offspring probabilities must sum to 1");
  if (p.size() > 1 && p[1] > 1e-12)
    throw std::invalid_argument("offspring law must have p1 = 0");
  if (critical && std::abs(mean() - 1.0) > 1e-9)
    throw std::invalid_argument("offspring law flagged critical must have mean 1");
}

double OffspringDist::mean() const {
  double m = 0;
  for (std::size_t i = 1; i < p.size(); ++i) m += static_cast<double>(i) * p[i];
  return m;
}

double OffspringDist::second_moment() const {
  double m = 0;
  for (std::size_t i = 1; i < p.size(); ++i)
    m += static_cast<double>(i) * static_cast<double>(i) * p[i];
  return m;
}

int OffspringDist::sample(Rng& rng) const {
  double u = rng.uniform();
  double acc = 0;
  int last = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) continue;
    acc += p[i];
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  return last;
}

int OffspringDist::sample_size_biased(Rng& rng) const {
  double total = mean();
  double u = rng.uniform() * total;
  double acc = 0;
  int last = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    double w = static_cast<double>(i) * p[i];
    if (w <= 0) continue;
    acc += w;
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  return last;
}

OffspringDist OffspringDist::catalan() {
  OffspringDist d;
  d.p = {0.5, 0.0, 0.5};
  d.critical = true;
  return d;
}

OffspringDist OffspringDist::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  OffspringDist d;
  if (!j.contains("p") || !j["p"].is_object())
    throw std::invalid_argument("offspring config needs an object field \"p\"");
  std::size_t max_arity = 0;
  for (auto& [key, val] : j["p"].items())
    max_arity = std::max(max_arity, static_cast<std::size_t>(std::stoul(key)));
  d.p.assign(max_arity + 1, 0.0);
  for (auto& [key, val] : j["p"].items())
    d.p[std::stoul(key)] = val.get<double>();
  d.critical = j.value("critical", false);
  d.validate();
  return d;
}

std::string OffspringDist::to_json_text() const {
  nlohmann::json probs = nlohmann::json::object();
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0) probs[std::to_string(i)] = p[i];
  nlohmann::json j{{"p", probs}, {"critical", critical}};
  return j.dump();
}

OffspringDist associative_offspring(int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  double rk = std::sqrt(static_cast<double>(k));
  double x = rk / (1.0 + rk);
  double coef = (1.0 + rk) / (k * (2.0 + rk));
  OffspringDist d;
  d.p.push_back((1.0 + rk) / (2.0 + rk));  // i = 0, weight k
  d.p.push_back(0.0);                      // i = 1, weight 0
  double term = coef * x * x;
  while (term >= 1e-17) {
    d.p.push_back(term);
    term *= x;
  }
  d.critical = true;
  return d;
}

std::optional<TreeShape> sample_gw(const OffspringDist& d, Rng& rng,
                                   std::uint64_t node_cap) {
  TreeShape t;
  t.nodes.emplace_back();
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    int arity = d.sample(rng);
    if (t.nodes.size() + arity > node_cap) return std::nullopt;
    for (int i = 0; i < arity; ++i) {
      int c = t.node_count();
      t.nodes.emplace_back();
      t.nodes[v].children.push_back(c);
      queue.push_back(c);
    }
  }
  return t;
}

bool size_attainable(const OffspringDist& d, int n, SizeMode mode) {
  if (n < 1) return false;
  if (d.p[0] <= 0) return false;  // no finite tree at all
  int target = n - 1;
  std::vector<char> reach(target + 1, 0);
  reach[0] = 1;
  for (std::size_t i = 2; i < d.p.size(); ++i) {
    if (d.p[i] <= 0) continue;
    int g = mode == SizeMode::TotalNodes ? static_cast<int>(i)
                                         : static_cast<int>(i) - 1;
    for (int s = g; s <= target; ++s)
      if (reach[s - g]) reach[s] = 1;
  }
  return reach[target];
}

TreeShape sample_gw_conditioned(const OffspringDist& d, int n, SizeMode mode,
                                Rng& rng, std::uint64_t retry_budget) {
  if (!size_attainable(d, n, mode))
    throw std::invalid_argument("requested size is not attainable under this offspring law");
  std::uint64_t generated = 0;
  while (generated < retry_budget) {
    TreeShape t;
    t.nodes.emplace_back();
    ++generated;
    std::deque<int> queue{0};
    int leaves = 0;
    bool aborted = false;
    std::uint64_t node_limit =
        mode == SizeMode::TotalNodes ? static_cast<std::uint64_t>(n)
                                     : 2 * static_cast<std::uint64_t>(n) - 1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      int arity = d.sample(rng);
      if (arity == 0) {
        if (mode == SizeMode::Leaves && ++leaves > n) {
          aborted = true;
          break;
        }
        continue;
      }
      if (t.nodes.size() + arity > node_limit) {
        generated += arity;
        aborted = true;
        break;
      }
      generated += arity;
      for (int i = 0; i < arity; ++i) {
        int c = t.node_count();
        t.nodes.emplace_back();
        t.nodes[v].children.push_back(c);
        queue.push_back(c);
      }
    }
    if (aborted) continue;
    if (mode == SizeMode::TotalNodes ? t.node_count() == n : leaves == n)
      return t;
  }
  throw std::runtime_error("conditioned sampling: retry budget exhausted");
}

TreeShape balanced_binary(int h) {
  if (h < 0) throw std::invalid_argument("height must be >= 0");
  TreeShape t;
  t.nodes.emplace_back();
  std::deque<std::pair<int, int>> queue{{0, 0}};
  while (!queue.empty()) {
    auto [v, d] = queue.front();
    queue.pop_front();
    if (d == h) continue;
    for (int i = 0; i < 2; ++i) {
      int c = t.node_count();
      t.nodes.emplace_back();
      t.nodes[v].children.push_back(c);
      queue.emplace_back(c, d + 1);
    }
  }
  return t;
}

TreeShape sample_bst(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  TreeShape t;
  struct Item {
    int node;
    int keys;
  };
  t.nodes.emplace_back();
  std::vector<Item> stack{{0, n - 1}};
  while (!stack.empty()) {
    auto [v, keys] = stack.back();
    stack.pop_back();
    if (keys == 0) continue;  // external position, stays a leaf
    int u = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(keys)));
    int left = t.node_count();
    t.nodes.emplace_back();
    t.nodes[v].children.push_back(left);
    int right = t.node_count();
    t.nodes.emplace_back();
    t.nodes[v].children.push_back(right);
    stack.push_back({right, keys - u});
    stack.push_back({left, u - 1});
  }
  return t;
}

namespace {

struct AlphaGrowth {
  struct GNode {
    int child[2] = {-1, -1};
    int parent = -1;  // -1 marks the root (child of the crossed node)
  };
  std::vector<GNode> g;
  std::vector<int> edges[2];  // child ids per class; 0 internal, 1 external
  std::vector<int> pos;
  std::vector<std::int8_t> cls;
  int root = 0;

  void add_edge(int child, int c) {
    cls[child] = static_cast<std::int8_t>(c);
    pos[child] = static_cast<int>(edges[c].size());
    edges[c].push_back(child);
  }

  void remove_edge(int child) {
    int c = cls[child];
    int i = pos[child];
    edges[c][i] = edges[c].back();
    pos[edges[c][i]] = i;
    edges[c].pop_back();
  }

  int new_node() {
    g.emplace_back();
    pos.push_back(-1);
    cls.push_back(-1);
    return static_cast<int>(g.size()) - 1;
  }

  bool is_internal_edge(int child) const {
    return child == root || g[child].child[0] != -1;
  }
};

}  // namespace

TreeShape sample_alpha(int n, double alpha, Rng& rng) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("alpha must lie in (0, 1]");
  if (n == 1) return TreeShape::single_leaf();

  AlphaGrowth gr;
  gr.new_node();
  gr.add_edge(0, 0);  // the root-edge counts as internal
  for (int m = 1; m < n; ++m) {
    double wi = alpha * static_cast<double>(gr.edges[0].size());
    double we = (1.0 - alpha) * static_cast<double>(gr.edges[1].size());
    double u = rng.uniform() * (wi + we);
    int v;
    if (u < wi || gr.edges[1].empty()) {
      auto idx = static_cast<std::size_t>(u / alpha);
      idx = std::min(idx, gr.edges[0].size() - 1);
      v = gr.edges[0][idx];
    } else {
      auto idx = static_cast<std::size_t>((u - wi) / (1.0 - alpha));
      idx = std::min(idx, gr.edges[1].size() - 1);
      v = gr.edges[1][idx];
    }
    int p = gr.g[v].parent;
    int b = gr.new_node();
    int leaf = gr.new_node();
    bool leaf_left = rng.coin();
    gr.g[b].child[0] = leaf_left ? leaf : v;
    gr.g[b].child[1] = leaf_left ? v : leaf;
    gr.g[b].parent = p;
    gr.g[v].parent = b;
    gr.g[leaf].parent = b;
    if (p == -1)
      gr.root = b;
    else
      gr.g[p].child[gr.g[p].child[0] == v ? 0 : 1] = b;
    gr.remove_edge(v);
    gr.add_edge(b, 0);
    gr.add_edge(v, gr.is_internal_edge(v) ? 0 : 1);
    gr.add_edge(leaf, 1);
  }

  TreeShape t;
  t.nodes.emplace_back();
  std::vector<std::pair<int, int>> stack{{gr.root, 0}};  // (growth id, shape id)
  while (!stack.empty()) {
    auto [gv, sv] = stack.back();
    stack.pop_back();
    if (gr.g[gv].child[0] == -1) continue;
    for (int i = 0; i < 2; ++i) {
      int c = t.node_count();
      t.nodes.emplace_back();
      t.nodes[sv].children.push_back(c);
      stack.emplace_back(gr.g[gv].child[i], c);
    }
  }
  return t;
}

double alpha_split_pmf(int n, double alpha, int j) {
  if (n < 2 || j < 1 || j > n - 1)
    throw std::invalid_argument("alpha_split_pmf needs n >= 2 and 1 <= j <= n-1");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("alpha must lie in (0, 1]");
  if (n == 2) return 1.0;
  if (alpha == 1.0) return (j == 1 || j == n - 1) ? 0.5 : 0.0;
  double l0 = std::lgamma(j - alpha) + std::lgamma(n - j - alpha) -
              std::lgamma(n - alpha) - std::lgamma(1.0 - alpha);
  double lbin = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) -
                std::lgamma(n - j + 1.0);
  double frac = static_cast<double>(j) * (n - j) /
                (static_cast<double>(n) * (n - 1));
  return std::exp(l0 + lbin) * (alpha / 2.0 + (1.0 - 2.0 * alpha) * frac);
}

std::int64_t sample_alpha_split(std::int64_t n, double alpha, Rng& rng,
                                std::uint64_t* steps, std::uint64_t max_steps) {
  if (n < 2) throw std::invalid_argument("split needs n >= 2");
  if (n == 2) {
    rng.uniform();  // keep stream alignment identical across sizes
    return 1;
  }
  if (alpha == 1.0) return rng.coin() ? 1 : n - 1;

  double u = rng.uniform();
  // q_n(m) = exp(l0 + lbin) * bracket(m), maintained incrementally while
  // walking m = 1, 2, ...; q is symmetric so the order 1, n-1, 2, n-2, ...
  // only needs the ascending recurrence.
  double l0 = std::lgamma(n - 1 - alpha) - std::lgamma(n - alpha);
  double lbin = std::log(static_cast<double>(n));
  double nd = static_cast<double>(n);
  double acc = 0;
  std::uint64_t local_steps = 0;
  std::int64_t half = n / 2;
  for (std::int64_t m = 1; m <= half; ++m) {
    ++local_steps;
    if (steps) ++(*steps);
    if (max_steps && local_steps > max_steps) return -1;
    double frac = static_cast<double>(m) * (nd - m) / (nd * (nd - 1.0));
    double q = std::exp(l0 + lbin) * (alpha / 2.0 + (1.0 - 2.0 * alpha) * frac);
    acc += q;
    if (u < acc) return m;
    if (m != n - m) {
      acc += q;
      if (u < acc) return n - m;
    }
    l0 += std::log(m - alpha) - std::log(nd - m - 1.0 - alpha);
    lbin += std::log(nd - m) - std::log(m + 1.0);
  }
  return half;  // float residue fallback
}

std::int64_t sample_alpha_hung_size(double alpha, Rng& rng) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("alpha must lie in (0, 1]");
  if (alpha == 1.0) return 1;
  double u = rng.uniform();
  if (u >= 1.0) u = std::nextafter(1.0, 0.0);
  // Tail is closed-form: P(N > m) = Gamma(m+1-alpha) / (m! Gamma(1-alpha)).
  double lg1a = std::lgamma(1.0 - alpha);
  auto log_tail = [&](double m) {
    return std::lgamma(m + 1.0 - alpha) - std::lgamma(m + 1.0) - lg1a;
  };
  double target = std::log1p(-u);
  if (log_tail(1) <= target) return 1;
  std::int64_t lo = 1, hi = 2;
  const std::int64_t cap = std::int64_t{1} << 60;
  while (log_tail(static_cast<double>(hi)) > target) {
    lo = hi;
    if (hi >= cap / 2) return cap;  // absurd tail draw; work caps censor it
    hi *= 2;
  }
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (log_tail(static_cast<double>(mid)) <= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double alpha_hung_size_pmf(double alpha, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (alpha == 1.0) return m == 1 ? 1.0 : 0.0;
  return std::exp(std::log(alpha) + std::lgamma(m - alpha) -
                  std::lgamma(m + 1.0) - std::lgamma(1.0 - alpha));
}

double alpha_gamma_split_pmf(int n, double alpha, double gamma,
                             const std::vector<int>& partition) {
  if (!(gamma > 0.0) || gamma > alpha || alpha > 1.0)
    throw std::invalid_argument("need 0 < gamma <= alpha <= 1");
  if (partition.size() < 2)
    throw std::invalid_argument("partition needs at least two parts");
  long long sum = 0;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    if (partition[i] < 1) throw std::invalid_argument("parts must be >= 1");
    if (i > 0 && partition[i] > partition[i - 1])
      throw std::invalid_argument("partition must be non-increasing");
    sum += partition[i];
  }
  if (sum != n) throw std::invalid_argument("partition must sum to n");

  int p = static_cast<int>(partition.size());
  double ratio;  // Gamma(p-1-gamma/alpha) / Gamma(1-gamma/alpha)
  if (gamma == alpha) {
    if (p > 2) return 0.0;
    ratio = 1.0;
  } else {
    double ga = gamma / alpha;
    ratio = std::exp(std::lgamma(p - 1 - ga) - std::lgamma(1.0 - ga));
  }
  double sum_sq = 0;
  for (int part : partition) sum_sq += static_cast<double>(part) * part;
  double cross = static_cast<double>(n) * n - sum_sq;  // sum_{i != j} n_i n_j
  double bracket =
      gamma + (1.0 - alpha - gamma) * cross / (static_cast<double>(n) * (n - 1));

  double log_term = std::lgamma(1.0 - alpha) - std::lgamma(n - alpha);
  log_term += std::lgamma(n + 1.0);
  for (int part : partition)
    log_term += std::lgamma(part - alpha) - std::lgamma(1.0 - alpha) -
                std::lgamma(part + 1.0);
  std::vector<int> mult(n + 1, 0);
  for (int part : partition) ++mult[part];
  for (int i = 1; i <= n; ++i)
    log_term -= std::lgamma(mult[i] + 1.0);
  return bracket * ratio * std::pow(alpha, p - 2) * std::exp(log_term);
}

namespace {
void partitions_rec(int n, int max_part, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int part = std::min(n, max_part); part >= 1; --part) {
    cur.push_back(part);
    partitions_rec(n - part, part, cur, out);
    cur.pop_back();
  }
}
}  // namespace

std::vector<std::vector<int>> partitions_of(int n, int min_parts) {
  std::vector<std::vector<int>> all;
  std::vector<int> cur;
  partitions_rec(n, n, cur, all);
  std::vector<std::vector<int>> out;
  for (auto& part : all)
    if (static_cast<int>(part.size()) >= min_parts) out.push_back(part);
  return out;
}

std::vector<int> sample_alpha_gamma_partition(int n, double alpha, double gamma,
                                              Rng& rng) {
  if (n < 2 || n > 20)
    throw std::invalid_argument("exact partition sampling supports 2 <= n <= 20");
  auto parts = partitions_of(n, 2);
  double u = rng.uniform();
  double acc = 0;
  for (const auto& part : parts) {
    acc += alpha_gamma_split_pmf(n, alpha, gamma, part);
    if (u < acc) return part;
  }
  return parts.back();  // float residue fallback
}

TreeShape sample_fragmentation(int n, const SplitSampler& split, Rng& rng) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  TreeShape t;
  t.nodes.emplace_back();
  std::vector<std::pair<int, int>> stack{{0, n}};  // (node, block size)
  while (!stack.empty()) {
    auto [v, block] = stack.back();
    stack.pop_back();
    if (block == 1) continue;
    std::vector<int> parts = split(block, rng);
    if (parts.size() < 2)
      throw std::invalid_argument("split law returned fewer than two parts");
    long long total = 0;
    for (int p : parts) {
      if (p < 1) throw std::invalid_argument("split law returned an empty part");
      total += p;
    }
    if (total != block)
      throw std::invalid_argument("split law parts do not sum to the block size");
    for (int p : parts) {
      int c = t.node_count();
      t.nodes.emplace_back();
      t.nodes[v].children.push_back(c);
      stack.emplace_back(c, p);
    }
  }
  return t;
}

std::vector<BigInt> unordered_binary_counts(int nmax) {
  if (nmax < 1) throw std::invalid_argument("nmax must be >= 1");
  std::vector<BigInt> y(nmax + 1);
  y[1] = 1;
  for (int n = 2; n <= nmax; ++n) {
    BigInt total = 0;
    for (int i = 1; 2 * i < n; ++i) total += y[i] * y[n - i];
    if (n % 2 == 0) total += y[n / 2] * (y[n / 2] + 1) / 2;
    y[n] = total;
  }
  return y;
}

double big_ratio_to_double(const BigInt& num, const BigInt& den) {
  boost::multiprecision::cpp_rational r(num, den);
  return r.convert_to<double>();
}

double unordered_split_pmf(const std::vector<BigInt>& y, int n, int i) {
  if (n < 3 || i < 1 || 2 * i >= n)
    throw std::invalid_argument("unordered_split_pmf needs 1 <= i < n/2");
  if (static_cast<int>(y.size()) <= n)
    throw std::invalid_argument("count table too small");
  return big_ratio_to_double(y[n - i] * y[i], y[n]);
}

double unordered_split_pmf(int n, int i) {
  return unordered_split_pmf(unordered_binary_counts(n), n, i);
}

SpineModel::SpineModel(OffspringDist d, std::uint64_t node_cap)
    : dist_(std::move(d)), node_cap_(node_cap) {
  dist_.validate();
  if (!dist_.critical)
    throw std::invalid_argument("spine construction needs a critical offspring law");
}

SpineLevel SpineModel::next_level(Rng& rng) const {
  SpineLevel level;
  level.degree = dist_.sample_size_biased(rng);
  level.spine_index = static_cast<int>(rng.below(level.degree));
  for (int i = 0; i + 1 < level.degree; ++i) {
    for (int attempt = 0;; ++attempt) {
      auto t = sample_gw(dist_, rng, node_cap_);
      if (t) {
        level.hung.push_back(std::move(*t));
        break;
      }
      if (attempt > 1000)
        throw std::runtime_error("spine level: hung subtree cap exceeded repeatedly");
    }
  }
  return level;
}

}  // namespace andor
