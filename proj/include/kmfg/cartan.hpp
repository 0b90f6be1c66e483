#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "kmfg/error.hpp"

namespace kmfg {

/// Generalized Cartan matrix. Entry (i, j) is <coroot_i, root_j>.
///
/// Indices are 0-based in the library API; every external format
/// (matrix files, named types, CLI index sets) is 1-based.
///
/// Construction validates the three defining invariants: a(i,i) = 2,
/// a(i,j) <= 0 off the diagonal, and a(i,j) = 0 exactly when a(j,i) = 0.
class CartanMatrix {
 public:
  /// Throws Error(InvalidMatrix) naming the violated invariant and entry.
  CartanMatrix(int rank, std::vector<int> row_major);

  int rank() const noexcept { return rank_; }
  int operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i * rank_ + j)]; }
  const std::vector<int>& entries() const noexcept { return entries_; }

  /// Simultaneous row/column permutation: result(i,j) = a(perm[i], perm[j]).
  CartanMatrix permuted(const std::vector<int>& perm) const;
  /// Principal submatrix on the given (sorted) indices.
  CartanMatrix restricted(const std::vector<int>& indices) const;

  friend bool operator==(const CartanMatrix&, const CartanMatrix&) = default;

 private:
  int rank_;
  std::vector<int> entries_;
};

/// The sign (-1)^a(i,j).
class Parity {
 public:
  static Parity from_entry(int entry) { return Parity(entry % 2 == 0 ? 1 : -1); }

  int value() const noexcept { return value_; }
  bool odd() const noexcept { return value_ < 0; }

  friend bool operator==(Parity, Parity) = default;
  friend Parity operator*(Parity a, Parity b) { return Parity(a.value_ * b.value_); }

 private:
  explicit Parity(int v) : value_(v) {}
  int value_;
};

struct HypothesisReport {
  bool irreducible = false;
  bool symmetrizable = false;
  bool two_spherical = false;
  bool spherical = false;
};

/// Plain format (rank followed by rank*rank integers, `#` comments) or
/// JSON ({"size": n, "entries": [[...], ...]}); the first non-blank
/// character decides. Syntax errors carry "line:column".
CartanMatrix parse_matrix(std::string_view text);
CartanMatrix parse_matrix(std::istream& in);

/// Plain format, one row per line, parseable by parse_matrix.
std::string to_plain_text(const CartanMatrix& m);
std::string to_json_text(const CartanMatrix& m);

/// Named types: A1.., B2.., C2.., D4.., E6.., F4, G2, optionally suffixed
/// with `~` for the untwisted affine matrix (the extra node is appended as
/// the last index). B_n has a(n,n-1) = -2, C_n is its transpose.
CartanMatrix from_named(std::string_view name);

/// The rank-16 indefinite diagram X from the introduction's table of
/// indefinite examples; vertices ordered 1a,1b,1c,2a,...,5c,6a.
CartanMatrix diagram_x();

Parity parity(const CartanMatrix& m, int i, int j);

bool is_symmetrizable(const CartanMatrix& m);
bool is_two_spherical(const CartanMatrix& m);
bool is_irreducible(const CartanMatrix& m);
bool is_simply_laced(const CartanMatrix& m);
/// Finite Weyl group: symmetrizable with positive definite symmetrization.
bool is_spherical(const CartanMatrix& m);
HypothesisReport hypotheses(const CartanMatrix& m);

/// Sorted, duplicate-free set of 0-based indices.
using IndexSet = std::vector<int>;

/// Sorts and deduplicates; throws IndexOutOfRange if an index is outside [0, rank).
IndexSet make_index_set(std::vector<int> indices, int rank);
/// "{1,3}" (1-based), "{}" for the empty set.
std::string index_set_key(const IndexSet& set);

/// Connected components of the Dynkin diagram (a(i,j) != 0), each sorted,
/// ordered by smallest vertex.
std::vector<std::vector<int>> diagram_components(const CartanMatrix& m);

}  // namespace kmfg
