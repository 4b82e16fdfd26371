#include "andor/complexity.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "andor/parallel.hpp"

namespace andor {

namespace {

// Compositions of m into r parts >= 1, lexicographic.
void compositions(int m, int r, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (r == 1) {
    cur.push_back(m);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int first = 1; first <= m - r + 1; ++first) {
    cur.push_back(first);
    compositions(m - first, r - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<TreeShape> enumerate_shapes(int m) {
  if (m < 1 || m > 8)
    throw std::invalid_argument("enumerate_shapes supports 1 <= m <= 8");
  static thread_local std::vector<std::vector<TreeShape>> cache;  // cache[m]
  if (static_cast<int>(cache.size()) > m && !cache[m].empty()) return cache[m];
  if (cache.empty()) cache.resize(9);

  if (m == 1) {
    cache[1] = {TreeShape::single_leaf()};
    return cache[1];
  }
  std::vector<TreeShape> out;
  for (int r = 2; r <= m; ++r) {
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(m, r, cur, comps);
    for (const auto& comp : comps) {
      // Cartesian product over child shape choices.
      std::vector<std::vector<TreeShape>> options;
      for (int part : comp) options.push_back(enumerate_shapes(part));
      std::vector<std::size_t> idx(comp.size(), 0);
      while (true) {
        std::vector<TreeShape> children;
        for (std::size_t i = 0; i < comp.size(); ++i)
          children.push_back(options[i][idx[i]]);
        out.push_back(TreeShape::with_children(children));
        std::size_t pos = comp.size();
        while (pos > 0) {
          --pos;
          if (++idx[pos] < options[pos].size()) break;
          idx[pos] = 0;
          if (pos == 0) goto done;
        }
      }
    done:;
    }
  }
  cache[m] = out;
  return out;
}

namespace {

// All functions first reached by one shape, with a minimal witness each.
std::map<BoolFn, std::string> shape_reachable(const TreeShape& shape, int k) {
  std::vector<int> leaves, internals;
  for (int v = 0; v < shape.node_count(); ++v)
    (shape.is_leaf(v) ? leaves : internals).push_back(v);

  AndOrTree tree;
  tree.shape = shape;
  tree.gates.assign(shape.nodes.size(), Gate::And);
  tree.leaf_labels.assign(shape.nodes.size(), Literal{1, false});

  std::map<BoolFn, std::string> reached;
  std::uint64_t gate_combos = std::uint64_t{1} << internals.size();
  std::uint64_t lit_count = 2 * static_cast<std::uint64_t>(k);
  for (std::uint64_t gbits = 0; gbits < gate_combos; ++gbits) {
    for (std::size_t i = 0; i < internals.size(); ++i)
      tree.gates[internals[i]] = (gbits >> i) & 1 ? Gate::Or : Gate::And;
    // Mixed-radix counter over leaf labels.
    std::vector<std::uint64_t> digits(leaves.size(), 0);
    while (true) {
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        tree.leaf_labels[leaves[i]] =
            Literal{static_cast<int>(digits[i] / 2) + 1, (digits[i] & 1) != 0};
      }
      BoolFn f = eval_tree(tree, k);
      reached.try_emplace(std::move(f), serialize(tree));
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
  return reached;
}

}  // namespace

ComplexityTable::ComplexityTable(int k, int max_size, int threads)
    : k_(k), max_size_(max_size) {
  if (k < 1 || k > 3 || max_size < 1 || max_size > 6)
    throw std::invalid_argument("complexity table limited to k <= 3, max_size <= 6");
  if (threads <= 0) threads = default_threads();

  table_[BoolFn::constant(k, true)] = {0, "T()"};
  table_[BoolFn::constant(k, false)] = {0, "F()"};

  for (int m = 1; m <= max_size; ++m) {
    const std::vector<TreeShape> shapes = enumerate_shapes(m);
    // one shape per chunk; reduction in shape order keeps witnesses stable
    using Partial = std::map<BoolFn, std::string>;
    Partial reached = run_chunked<Partial>(
        shapes.size(), 1, threads,
        [&](std::uint64_t begin, std::uint64_t end, Partial& part) {
          for (std::uint64_t s = begin; s < end; ++s) {
            for (auto& [f, witness] : shape_reachable(shapes[s], k))
              part.try_emplace(f, std::move(witness));
          }
        },
        [](Partial& acc, Partial& part) {
          for (auto& [f, witness] : part) acc.try_emplace(f, std::move(witness));
        });
    for (auto& [f, witness] : reached)
      table_.try_emplace(f, ComplexityEntry{m, std::move(witness)});
  }
}

bool ComplexityTable::contains(const BoolFn& f) const { return table_.count(f) > 0; }

int ComplexityTable::complexity(const BoolFn& f) const { return entry(f).complexity; }

const ComplexityEntry& ComplexityTable::entry(const BoolFn& f) const {
  auto it = table_.find(f);
  if (it == table_.end())
    throw std::out_of_range("function unknown to the complexity table");
  return it->second;
}

bool ComplexityTable::is_read_once(const BoolFn& f) const {
  if (f.is_constant()) return false;
  return complexity(f) == f.essential_count();
}

std::string ComplexityTable::to_csv() const {
  std::string out = "fn,L,Ess,read_once,witness\n";
  for (const auto& [f, e] : table_) {
    out += f.to_text();
    out += ',';
    out += std::to_string(e.complexity);
    out += ',';
    out += std::to_string(f.essential_count());
    out += ',';
    out += is_read_once(f) ? '1' : '0';
    out += ',';
    out += e.witness;
    out += '\n';
  }
  return out;
}

std::uint64_t orbit_size(const BoolFn& f, int k) {
  if (f.arity() > k) throw std::invalid_argument("f arity exceeds k");
  if (k > 8) throw std::invalid_argument("orbit_size guarded to k <= 8");
  BoolFn base = f.extend(k);
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i + 1;
  std::set<BoolFn> orbit;
  do {
    orbit.insert(base.permute_vars(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return orbit.size();
}

}  // namespace andor
