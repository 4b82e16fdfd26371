#include "andor/trimming.hpp"

#include <cctype>
#include <deque>

#include "json.hpp"

namespace andor {

bool ConstraintSet::require(int var, bool value) {
  auto [it, inserted] = forced_.try_emplace(var, value);
  if (!inserted && it->second != value) consistent_ = false;
  return consistent_;
}

namespace {

std::vector<int> subtree_node_counts(const TreeShape& shape) {
  std::vector<int> order;
  order.reserve(shape.nodes.size());
  std::vector<int> stack{shape.root()};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int c : shape.nodes[v].children) stack.push_back(c);
  }
  std::vector<int> count(shape.nodes.size(), 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    for (int c : shape.nodes[*it].children) count[*it] += count[c];
  return count;
}

int new_trim_node(TrimmedTree& out, TrimmedTree::Kind kind) {
  out.shape.nodes.emplace_back();
  out.kind.push_back(kind);
  out.gates.push_back(Gate::And);
  out.leaf_labels.push_back(Literal{});
  return out.shape.node_count() - 1;
}

}  // namespace

TrimmedTree trim(const AndOrTree& tree) {
  tree.validate();
  std::vector<int> sub_count = subtree_node_counts(tree.shape);

  TrimmedTree out;
  struct Item {
    int orig;
    int copy;
    ConstraintSet constraints;
  };
  std::deque<Item> queue;
  {
    int root = tree.shape.root();
    auto kind = tree.shape.is_leaf(root) ? TrimmedTree::Kind::LiteralLeaf
                                         : TrimmedTree::Kind::Internal;
    int copy = new_trim_node(out, kind);
    if (kind == TrimmedTree::Kind::LiteralLeaf)
      out.leaf_labels[copy] = tree.leaf_labels[root];
    else
      out.gates[copy] = tree.gates[root];
    queue.push_back({root, copy, ConstraintSet{}});
  }

  while (!queue.empty()) {
    Item item = std::move(queue.front());
    queue.pop_front();
    int u = item.orig;
    if (tree.shape.is_leaf(u)) continue;

    // Constraint set shared by all children of u: the parent set plus one
    // constraint per leaf child, each leaf contributing its own as well.
    ConstraintSet child_set = item.constraints;
    Gate g = tree.gates[u];
    for (int c : tree.shape.nodes[u].children) {
      if (!tree.shape.is_leaf(c)) continue;
      const Literal& lit = tree.leaf_labels[c];
      child_set.require(lit.var, g == Gate::And ? !lit.negated : lit.negated);
    }

    if (!child_set.consistent()) {
      // All children are inconsistent; u keeps its gate and becomes a leaf.
      out.kind[item.copy] = TrimmedTree::Kind::GateLeaf;
      out.gates[item.copy] = g;
      for (int c : tree.shape.nodes[u].children) out.cut_nodes += sub_count[c];
      continue;
    }
    for (int c : tree.shape.nodes[u].children) {
      auto kind = tree.shape.is_leaf(c) ? TrimmedTree::Kind::LiteralLeaf
                                        : TrimmedTree::Kind::Internal;
      int copy = new_trim_node(out, kind);
      out.shape.nodes[item.copy].children.push_back(copy);
      if (kind == TrimmedTree::Kind::LiteralLeaf)
        out.leaf_labels[copy] = tree.leaf_labels[c];
      else
        out.gates[copy] = tree.gates[c];
      queue.push_back({c, copy, child_set});
    }
  }
  return out;
}

int trim_size(const TrimmedTree& t) {
  int n = 0;
  for (auto k : t.kind)
    if (k == TrimmedTree::Kind::LiteralLeaf) ++n;
  return n;
}

namespace {
int repetition_count(int literal_leaves, const std::set<int>& vars) {
  return literal_leaves - static_cast<int>(vars.size());
}
}  // namespace

int repetitions(const AndOrTree& t) {
  std::set<int> vars;
  int leaves = 0;
  for (int v = 0; v < t.shape.node_count(); ++v)
    if (t.shape.is_leaf(v)) {
      ++leaves;
      vars.insert(t.leaf_labels[v].var);
    }
  return repetition_count(leaves, vars);
}

int repetitions(const TrimmedTree& t) {
  std::set<int> vars;
  int leaves = 0;
  for (int v = 0; v < t.shape.node_count(); ++v)
    if (t.kind[v] == TrimmedTree::Kind::LiteralLeaf) {
      ++leaves;
      vars.insert(t.leaf_labels[v].var);
    }
  return repetition_count(leaves, vars);
}

namespace {
BoolFn eval_trimmed_rec(const TrimmedTree& t, int v, int k) {
  switch (t.kind[v]) {
    case TrimmedTree::Kind::LiteralLeaf: {
      const Literal& lit = t.leaf_labels[v];
      if (lit.var > k) throw std::invalid_argument("leaf variable exceeds k");
      return BoolFn::literal(k, lit.var, lit.negated);
    }
    case TrimmedTree::Kind::GateLeaf:
      return BoolFn::constant(k, t.gates[v] == Gate::Or);
    case TrimmedTree::Kind::Internal: {
      const auto& ch = t.shape.nodes[v].children;
      BoolFn acc = eval_trimmed_rec(t, ch[0], k);
      for (std::size_t i = 1; i < ch.size(); ++i) {
        BoolFn next = eval_trimmed_rec(t, ch[i], k);
        acc = t.gates[v] == Gate::And ? (acc & next) : (acc | next);
      }
      return acc;
    }
  }
  throw std::logic_error("bad node kind");
}
}  // namespace

BoolFn eval_trimmed(const TrimmedTree& t, int k) {
  return eval_trimmed_rec(t, t.shape.root(), k);
}

TrimmedTree negation_dual(const TrimmedTree& t) {
  TrimmedTree out = t;
  for (int v = 0; v < t.shape.node_count(); ++v) {
    if (t.kind[v] == TrimmedTree::Kind::LiteralLeaf)
      out.leaf_labels[v].negated = !out.leaf_labels[v].negated;
    else
      out.gates[v] = dual(out.gates[v]);
  }
  return out;
}

namespace {
void serialize_trim_rec(const TrimmedTree& t, int v, std::string& out) {
  switch (t.kind[v]) {
    case TrimmedTree::Kind::LiteralLeaf: {
      const Literal& lit = t.leaf_labels[v];
      if (lit.negated) out += '~';
      out += 'x';
      out += std::to_string(lit.var);
      return;
    }
    case TrimmedTree::Kind::GateLeaf:
      out += t.gates[v] == Gate::Or ? "T()" : "F()";
      return;
    case TrimmedTree::Kind::Internal: {
      out += '(';
      const char op = t.gates[v] == Gate::And ? '&' : '|';
      const auto& ch = t.shape.nodes[v].children;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (i) out += op;
        serialize_trim_rec(t, ch[i], out);
      }
      out += ')';
      return;
    }
  }
}

struct TrimParser {
  const std::string& text;
  std::size_t pos = 0;

  explicit TrimParser(const std::string& s) : text(s) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos); }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }

  int atom(TrimmedTree& t) {
    char c = peek();
    if (c == 'T' || c == 'F') {
      ++pos;
      expect('(');
      expect(')');
      int node = new_trim_node(t, TrimmedTree::Kind::GateLeaf);
      t.gates[node] = c == 'T' ? Gate::Or : Gate::And;
      return node;
    }
    if (c == '(') {
      ++pos;
      int node = new_trim_node(t, TrimmedTree::Kind::Internal);
      std::vector<int> children{atom(t)};
      if (peek() == ')') fail("unary group");
      char op = 0;
      while (true) {
        char d = peek();
        if (d == ')') {
          ++pos;
          break;
        }
        if (d != '&' && d != '|') fail("expected '&', '|' or ')'");
        if (op == 0)
          op = d;
        else if (op != d)
          fail("mixed operators within one group");
        ++pos;
        children.push_back(atom(t));
      }
      t.shape.nodes[node].children = std::move(children);
      t.gates[node] = op == '&' ? Gate::And : Gate::Or;
      return node;
    }
    // literal
    bool neg = false;
    if (c == '~') {
      ++pos;
      neg = true;
    }
    if (peek() != 'x') fail("expected literal, 'T()' or 'F()'");
    ++pos;
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      fail("expected variable index after 'x'");
    if (text[pos] == '0') fail("variable index has a leading zero");
    long var = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      var = var * 10 + (text[pos] - '0');
      if (var > 1'000'000) fail("variable index too large");
      ++pos;
    }
    int node = new_trim_node(t, TrimmedTree::Kind::LiteralLeaf);
    t.leaf_labels[node] = Literal{static_cast<int>(var), neg};
    return node;
  }
};
}  // namespace

std::string serialize(const TrimmedTree& t) {
  std::string out;
  serialize_trim_rec(t, t.shape.root(), out);
  return out;
}

TrimmedTree parse_trimmed(const std::string& text) {
  TrimParser p(text);
  TrimmedTree t;
  p.atom(t);
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing characters after expression");
  return t;
}

std::string trim_report_json(const AndOrTree& tree, int k) {
  TrimmedTree trimmed = trim(tree);
  nlohmann::json j;
  j["input_size"] = size(tree);
  j["trim_size"] = trim_size(trimmed);
  j["repetitions_before"] = repetitions(tree);
  j["repetitions_after"] = repetitions(trimmed);
  j["cut_nodes"] = trimmed.cut_nodes;
  j["function"] = eval_tree(tree, k).to_text();
  j["trimmed"] = serialize(trimmed);
  return j.dump(2);
}

}  // namespace andor
