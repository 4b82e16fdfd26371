#include "andor/boolfn.hpp"

#include <algorithm>
#include <stdexcept>

namespace andor {

namespace {
std::size_t word_count(int arity) {
  std::uint64_t bits = std::uint64_t{1} << arity;
  return static_cast<std::size_t>((bits + 63) / 64);
}
}  // namespace

BoolFn::BoolFn(int arity) : arity_(arity) {
  if (arity < 1 || arity > kMaxArity)
    throw std::invalid_argument("BoolFn arity must be in [1, 16]");
  words_.assign(word_count(arity), 0);
}

BoolFn BoolFn::constant(int arity, bool value) {
  BoolFn f(arity);
  if (value) {
    std::fill(f.words_.begin(), f.words_.end(), ~std::uint64_t{0});
    f.mask_top();
  }
  return f;
}

BoolFn BoolFn::from_words(int arity, const std::vector<std::uint64_t>& words) {
  BoolFn f(arity);
  if (words.size() != f.words_.size())
    throw std::invalid_argument("word count does not match arity");
  f.words_ = words;
  f.mask_top();
  return f;
}

BoolFn BoolFn::literal(int arity, int var, bool negated) {
  if (var < 1 || var > arity) throw std::invalid_argument("literal var out of range");
  BoolFn f(arity);
  for (std::uint64_t a = 0; a < f.table_bits(); ++a) {
    bool v = (a >> (var - 1)) & 1;
    f.set_bit(a, negated ? !v : v);
  }
  return f;
}

void BoolFn::set_bit(std::uint64_t index, bool value) {
  std::uint64_t mask = std::uint64_t{1} << (index & 63);
  if (value)
    words_[index >> 6] |= mask;
  else
    words_[index >> 6] &= ~mask;
}

bool BoolFn::eval(const std::vector<int>& assignment) const {
  if (static_cast<int>(assignment.size()) != arity_)
    throw std::invalid_argument("assignment length does not match arity");
  std::uint64_t index = 0;
  for (int i = 0; i < arity_; ++i)
    if (assignment[i]) index |= std::uint64_t{1} << i;
  return bit(index);
}

bool BoolFn::is_true() const {
  std::uint64_t bits = table_bits();
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t expect = ~std::uint64_t{0};
    if (bits < 64) expect = (std::uint64_t{1} << bits) - 1;
    if (words_[w] != expect) return false;
  }
  return true;
}

bool BoolFn::is_false() const {
  for (auto w : words_)
    if (w != 0) return false;
  return true;
}

BoolFn BoolFn::operator~() const {
  BoolFn r(*this);
  for (auto& w : r.words_) w = ~w;
  r.mask_top();
  return r;
}

BoolFn BoolFn::operator&(const BoolFn& other) const {
  if (arity_ != other.arity_) throw std::invalid_argument("arity mismatch");
  BoolFn r(*this);
  for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= other.words_[i];
  return r;
}

BoolFn BoolFn::operator|(const BoolFn& other) const {
  if (arity_ != other.arity_) throw std::invalid_argument("arity mismatch");
  BoolFn r(*this);
  for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] |= other.words_[i];
  return r;
}

BoolFn BoolFn::operator^(const BoolFn& other) const {
  if (arity_ != other.arity_) throw std::invalid_argument("arity mismatch");
  BoolFn r(*this);
  for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] ^= other.words_[i];
  return r;
}

bool BoolFn::operator<(const BoolFn& other) const {
  if (arity_ != other.arity_) return arity_ < other.arity_;
  return words_ < other.words_;
}

BoolFn BoolFn::restrict(int var, bool value) const {
  if (var < 1 || var > arity_) throw std::invalid_argument("restrict index out of range");
  BoolFn r(*this);
  std::uint64_t vbit = std::uint64_t{1} << (var - 1);
  for (std::uint64_t a = 0; a < table_bits(); ++a) {
    bool av = (a & vbit) != 0;
    if (av != value) r.set_bit(a, bit(value ? (a | vbit) : (a & ~vbit)));
  }
  return r;
}

BoolFn BoolFn::extend(int arity) const {
  if (arity < arity_) throw std::invalid_argument("extend target smaller than arity");
  if (arity == arity_) return *this;
  BoolFn r(arity);
  std::uint64_t low_mask = table_bits() - 1;
  for (std::uint64_t a = 0; a < r.table_bits(); ++a)
    r.set_bit(a, bit(a & low_mask));
  return r;
}

std::set<int> BoolFn::essential_vars() const {
  std::set<int> out;
  for (int i = 1; i <= arity_; ++i)
    if (restrict(i, false) != restrict(i, true)) out.insert(i);
  return out;
}

BoolFn BoolFn::permute_vars(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != arity_)
    throw std::invalid_argument("permutation size must equal arity");
  BoolFn r(arity_);
  for (std::uint64_t a = 0; a < table_bits(); ++a) {
    std::uint64_t src = 0;
    for (int i = 0; i < arity_; ++i)
      if ((a >> i) & 1) src |= std::uint64_t{1} << (perm[i] - 1);
    r.set_bit(a, bit(src));
  }
  return r;
}

std::string BoolFn::to_text() const {
  static const char* digits = "0123456789ABCDEF";
  std::uint64_t bits = table_bits();
  std::size_t nibbles = static_cast<std::size_t>((bits + 3) / 4);
  std::string hex(nibbles, '0');
  for (std::size_t n = 0; n < nibbles; ++n) {
    int v = 0;
    for (int i = 0; i < 4; ++i) {
      std::uint64_t idx = 4 * n + i;
      if (idx < bits && bit(idx)) v |= 1 << i;
    }
    hex[n] = digits[v];
  }
  return std::to_string(arity_) + ":" + hex;
}

BoolFn BoolFn::from_text(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("expected \"k:HEX\"");
  int arity = std::stoi(text.substr(0, colon));
  BoolFn f(arity);
  std::string hex = text.substr(colon + 1);
  std::uint64_t bits = f.table_bits();
  std::size_t nibbles = static_cast<std::size_t>((bits + 3) / 4);
  if (hex.size() != nibbles)
    throw std::invalid_argument("truth table hex has wrong length for arity");
  for (std::size_t n = 0; n < nibbles; ++n) {
    char c = hex[n];
    int v;
    if (c >= '0' && c <= '9')
      v = c - '0';
    else if (c >= 'A' && c <= 'F')
      v = c - 'A' + 10;
    else if (c >= 'a' && c <= 'f')
      v = c - 'a' + 10;
    else
      throw std::invalid_argument("invalid hex digit in truth table");
    for (int i = 0; i < 4; ++i) {
      std::uint64_t idx = 4 * n + i;
      if (idx < bits) f.set_bit(idx, (v >> i) & 1);
    }
  }
  return f;
}

std::size_t BoolFn::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(arity_);
  for (auto w : words_) {
    h ^= w;
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

void BoolFn::mask_top() {
  std::uint64_t bits = table_bits();
  if (bits < 64) words_[0] &= (std::uint64_t{1} << bits) - 1;
}

BoolFn combine(Connective op, const BoolFn& f, const BoolFn* g) {
  switch (op) {
    case Connective::Not:
      return ~f;
    case Connective::And:
      if (!g) throw std::invalid_argument("AND needs two operands");
      return f & *g;
    case Connective::Or:
      if (!g) throw std::invalid_argument("OR needs two operands");
      return f | *g;
  }
  throw std::invalid_argument("unknown connective");
}

}  // namespace andor
