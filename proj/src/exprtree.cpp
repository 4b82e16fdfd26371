#include "andor/exprtree.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace andor {

TreeShape TreeShape::single_leaf() {
  TreeShape t;
  t.nodes.emplace_back();
  return t;
}

TreeShape TreeShape::with_children(const std::vector<TreeShape>& subtrees) {
  if (subtrees.size() < 2)
    throw std::invalid_argument("internal node needs at least two children");
  TreeShape t;
  t.nodes.emplace_back();
  for (const auto& sub : subtrees) {
    int offset = t.node_count();
    t.nodes[0].children.push_back(offset);
    for (const auto& n : sub.nodes) {
      Node copy;
      copy.children.reserve(n.children.size());
      for (int c : n.children) copy.children.push_back(c + offset);
      t.nodes.push_back(std::move(copy));
    }
  }
  return t;
}

void TreeShape::validate() const {
  if (nodes.empty()) throw std::invalid_argument("empty tree");
  std::vector<int> seen(nodes.size(), 0);
  seen[0] = 1;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (nodes[v].children.size() == 1)
      throw std::invalid_argument("node of arity one");
    for (int c : nodes[v].children) {
      if (c <= 0 || c >= node_count() || seen[c]++)
        throw std::invalid_argument("broken child indices");
    }
  }
  for (std::size_t v = 1; v < nodes.size(); ++v)
    if (!seen[v]) throw std::invalid_argument("unreachable node");
}

int size(const TreeShape& t) {
  int leaves = 0;
  for (const auto& n : t.nodes)
    if (n.children.empty()) ++leaves;
  return leaves;
}

int saturation_level(const TreeShape& t) {
  std::deque<std::pair<int, int>> queue{{t.root(), 0}};
  while (!queue.empty()) {
    auto [v, d] = queue.front();
    queue.pop_front();
    if (t.is_leaf(v)) return d;
    for (int c : t.nodes[v].children) queue.emplace_back(c, d + 1);
  }
  return 0;
}

int height(const TreeShape& t) {
  int h = 0;
  std::deque<std::pair<int, int>> queue{{t.root(), 0}};
  while (!queue.empty()) {
    auto [v, d] = queue.front();
    queue.pop_front();
    h = std::max(h, d);
    for (int c : t.nodes[v].children) queue.emplace_back(c, d + 1);
  }
  return h;
}

TreeShape truncate(const TreeShape& t, int h) {
  if (h < 0) throw std::invalid_argument("truncation height must be >= 0");
  TreeShape out;
  std::vector<int> map(t.nodes.size(), -1);
  std::deque<std::pair<int, int>> queue{{t.root(), 0}};
  out.nodes.emplace_back();
  map[t.root()] = 0;
  while (!queue.empty()) {
    auto [v, d] = queue.front();
    queue.pop_front();
    if (d == h) continue;
    for (int c : t.nodes[v].children) {
      map[c] = out.node_count();
      out.nodes.emplace_back();
      out.nodes[map[v]].children.push_back(map[c]);
      queue.emplace_back(c, d + 1);
    }
  }
  return out;
}

bool same_shape(const TreeShape& a, const TreeShape& b) {
  return shape_key(a) == shape_key(b);
}

namespace {
void shape_key_rec(const TreeShape& t, int v, std::string& out) {
  if (t.is_leaf(v)) {
    out += '*';
    return;
  }
  out += '(';
  for (int c : t.nodes[v].children) shape_key_rec(t, c, out);
  out += ')';
}
}  // namespace

std::string shape_key(const TreeShape& t) {
  std::string out;
  shape_key_rec(t, t.root(), out);
  return out;
}

void AndOrTree::validate() const {
  shape.validate();
  if (gates.size() != shape.nodes.size() || leaf_labels.size() != shape.nodes.size())
    throw std::invalid_argument("label vectors must match node count");
  for (int v = 0; v < shape.node_count(); ++v)
    if (shape.is_leaf(v) && leaf_labels[v].var < 1)
      throw std::invalid_argument("leaf without literal");
}

int size(const AndOrTree& t) { return size(t.shape); }

int max_var(const AndOrTree& t) {
  int k = 1;
  for (int v = 0; v < t.shape.node_count(); ++v)
    if (t.shape.is_leaf(v)) k = std::max(k, t.leaf_labels[v].var);
  return k;
}

AndOrTree random_labelling(const TreeShape& t, int k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  AndOrTree out;
  out.shape = t;
  out.gates.assign(t.nodes.size(), Gate::And);
  out.leaf_labels.assign(t.nodes.size(), Literal{});
  for (int v = 0; v < t.node_count(); ++v) {
    if (t.is_leaf(v)) {
      std::uint64_t u = rng.below(2 * static_cast<std::uint64_t>(k));
      out.leaf_labels[v] = Literal{static_cast<int>(u / 2) + 1, (u & 1) != 0};
    } else {
      out.gates[v] = rng.coin() ? Gate::And : Gate::Or;
    }
  }
  return out;
}

BoolFn eval_tree(const AndOrTree& t, int k) {
  // Post-order without recursion; trees can be large (e.g. BST shapes).
  std::vector<BoolFn> value;
  value.reserve(t.shape.nodes.size());
  std::vector<int> order;
  order.reserve(t.shape.nodes.size());
  {
    std::vector<int> stack{t.shape.root()};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (int c : t.shape.nodes[v].children) stack.push_back(c);
    }
  }
  std::vector<BoolFn> slot(t.shape.nodes.size(), BoolFn(k));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (t.shape.is_leaf(v)) {
      const Literal& lit = t.leaf_labels[v];
      if (lit.var > k)
        throw std::invalid_argument("leaf variable exceeds k");
      slot[v] = BoolFn::literal(k, lit.var, lit.negated);
    } else {
      const auto& ch = t.shape.nodes[v].children;
      BoolFn acc = slot[ch[0]];
      for (std::size_t i = 1; i < ch.size(); ++i)
        acc = t.gates[v] == Gate::And ? (acc & slot[ch[i]]) : (acc | slot[ch[i]]);
      slot[v] = std::move(acc);
    }
  }
  return slot[t.shape.root()];
}

namespace {
bool eval_at_rec(const AndOrTree& t, int v, const std::vector<int>& a) {
  if (t.shape.is_leaf(v)) {
    const Literal& lit = t.leaf_labels[v];
    bool val = a[lit.var - 1] != 0;
    return lit.negated ? !val : val;
  }
  bool acc = t.gates[v] == Gate::And;
  for (int c : t.shape.nodes[v].children) {
    bool cv = eval_at_rec(t, c, a);
    acc = t.gates[v] == Gate::And ? (acc && cv) : (acc || cv);
  }
  return acc;
}
}  // namespace

bool eval_tree_at(const AndOrTree& t, const std::vector<int>& assignment) {
  return eval_at_rec(t, t.shape.root(), assignment);
}

AndOrTree negation_dual(const AndOrTree& t) {
  AndOrTree out = t;
  for (int v = 0; v < t.shape.node_count(); ++v) {
    if (t.shape.is_leaf(v))
      out.leaf_labels[v].negated = !out.leaf_labels[v].negated;
    else
      out.gates[v] = dual(out.gates[v]);
  }
  return out;
}

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  explicit Parser(const std::string& s) : text(s) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos); }

  Literal literal() {
    skip_ws();
    bool neg = false;
    if (peek() == '~') {
      neg = true;
      ++pos;
      skip_ws();
    }
    if (peek() != 'x') fail("expected literal");
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
    return Literal{static_cast<int>(var), neg};
  }

  // Appends the parsed expression to `tree` and returns its node index.
  int expr(AndOrTree& tree) {
    skip_ws();
    if (peek() == '(') {
      ++pos;
      int node = new_node(tree);
      std::vector<int> children;
      children.push_back(expr(tree));
      skip_ws();
      if (peek() == ')') fail("unary group");
      char op = 0;
      while (true) {
        char c = peek();
        if (c == ')') {
          ++pos;
          break;
        }
        if (c != '&' && c != '|') fail("expected '&', '|' or ')'");
        if (op == 0)
          op = c;
        else if (op != c)
          fail("mixed operators within one group");
        ++pos;
        children.push_back(expr(tree));
      }
      tree.shape.nodes[node].children = std::move(children);
      tree.gates[node] = op == '&' ? Gate::And : Gate::Or;
      return node;
    }
    int node = new_node(tree);
    tree.leaf_labels[node] = literal();
    return node;
  }

  static int new_node(AndOrTree& tree) {
    tree.shape.nodes.emplace_back();
    tree.gates.push_back(Gate::And);
    tree.leaf_labels.push_back(Literal{});
    return tree.shape.node_count() - 1;
  }
};

void serialize_rec(const AndOrTree& t, int v, std::string& out) {
  if (t.shape.is_leaf(v)) {
    const Literal& lit = t.leaf_labels[v];
    if (lit.negated) out += '~';
    out += 'x';
    out += std::to_string(lit.var);
    return;
  }
  out += '(';
  const char op = t.gates[v] == Gate::And ? '&' : '|';
  const auto& ch = t.shape.nodes[v].children;
  for (std::size_t i = 0; i < ch.size(); ++i) {
    if (i) out += op;
    serialize_rec(t, ch[i], out);
  }
  out += ')';
}

}  // namespace

AndOrTree parse(const std::string& text) {
  Parser p(text);
  AndOrTree tree;
  p.expr(tree);
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing characters after expression");
  tree.validate();
  return tree;
}

std::string serialize(const AndOrTree& t) {
  std::string out;
  serialize_rec(t, t.shape.root(), out);
  return out;
}

}  // namespace andor
