#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace andor {

// A k-variable Boolean function stored as a truth table of 2^k bits.
// Bit index of an assignment (b_1,...,b_k) is sum_i b_i * 2^(i-1), so
// variable i sits at bit weight 2^(i-1). Immutable value type with
// structural equality and a stable hash.
class BoolFn {
 public:
  static constexpr int kMaxArity = 16;

  // All-false function of the given arity.
  explicit BoolFn(int arity);

  static BoolFn constant(int arity, bool value);
  // The projection x_var, or its negation.
  static BoolFn literal(int arity, int var, bool negated);
  // Adopts a raw table; words beyond 2^arity bits are masked off.
  static BoolFn from_words(int arity, const std::vector<std::uint64_t>& words);

  int arity() const { return arity_; }
  std::uint64_t table_bits() const { return std::uint64_t{1} << arity_; }

  bool bit(std::uint64_t index) const {
    return (words_[index >> 6] >> (index & 63)) & 1;
  }
  void set_bit(std::uint64_t index, bool value);

  // Evaluates at an assignment given as k bits (vector of 0/1).
  bool eval(const std::vector<int>& assignment) const;
  bool eval_index(std::uint64_t index) const { return bit(index); }

  bool is_true() const;
  bool is_false() const;
  bool is_constant() const { return is_true() || is_false(); }

  BoolFn operator~() const;
  BoolFn operator&(const BoolFn& other) const;
  BoolFn operator|(const BoolFn& other) const;
  BoolFn operator^(const BoolFn& other) const;

  bool operator==(const BoolFn& other) const {
    return arity_ == other.arity_ && words_ == other.words_;
  }
  bool operator!=(const BoolFn& other) const { return !(*this == other); }
  // Total order: by arity, then lexicographic on words. Used to make
  // map iteration (and therefore serialized output) deterministic.
  bool operator<(const BoolFn& other) const;

  // Fixes variable i (1-based) to bit b; arity is preserved and the result
  // no longer depends on variable i.
  BoolFn restrict(int var, bool value) const;

  // Pads the function to a larger arity; added variables are ignored.
  BoolFn extend(int arity) const;

  // Indices of variables whose two restrictions differ.
  std::set<int> essential_vars() const;
  int essential_count() const { return static_cast<int>(essential_vars().size()); }

  // Applies a permutation of the variables: result(x_1,...,x_k) =
  // f(x_{perm[0]}, ..., x_{perm[k-1]}) with perm a 1-based index list.
  BoolFn permute_vars(const std::vector<int>& perm) const;

  // Canonical text form "k:HEX", little-endian nibbles (bit 0 first).
  std::string to_text() const;
  static BoolFn from_text(const std::string& text);

  std::size_t hash() const;

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  void mask_top();
  int arity_;
  std::vector<std::uint64_t> words_;
};

struct BoolFnHash {
  std::size_t operator()(const BoolFn& f) const { return f.hash(); }
};

// Pointwise connective algebra; NOT ignores g.
enum class Connective { And, Or, Not };
BoolFn combine(Connective op, const BoolFn& f, const BoolFn* g = nullptr);

}  // namespace andor

template <>
struct std::hash<andor::BoolFn> {
  std::size_t operator()(const andor::BoolFn& f) const { return f.hash(); }
};
