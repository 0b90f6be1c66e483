#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "kmfg/cartan.hpp"

namespace kmfg {

/// Vector in the root lattice, coordinates in the simple-root basis.
struct RootVector {
  std::vector<std::int64_t> coords;

  bool is_zero() const noexcept;
  bool is_positive() const noexcept;  // all >= 0, not all zero
  bool is_negative() const noexcept;  // all <= 0, not all zero

  friend bool operator==(const RootVector&, const RootVector&) = default;
  friend auto operator<=>(const RootVector&, const RootVector&) = default;
};

/// A word in the simple reflections; letters are 0-based indices.
using Word = std::vector<int>;

/// Weyl group element, identified by its integer action on the root
/// lattice (row-major n x n). Only WeylGroup creates elements, so the
/// cached length is always the Coxeter length.
class WeylElement {
 public:
  int rank() const noexcept { return rank_; }
  int length() const noexcept { return length_; }
  std::int64_t operator()(int row, int col) const { return action_[static_cast<std::size_t>(row * rank_ + col)]; }
  const std::vector<std::int64_t>& action() const noexcept { return action_; }
  bool is_identity() const noexcept;

  friend bool operator==(const WeylElement& a, const WeylElement& b) { return a.action_ == b.action_; }

 private:
  friend class WeylGroup;
  WeylElement(int rank, std::vector<std::int64_t> action, int length)
      : rank_(rank), length_(length), action_(std::move(action)) {}

  int rank_;
  int length_;
  std::vector<std::int64_t> action_;
};

inline constexpr std::size_t kDefaultElementCap = 1'000'000;

/// Reflection representation of the Weyl group of a generalized Cartan
/// matrix: generator i sends e_j to e_j - a(i,j) e_i.
///
/// Arithmetic is checked; an overflowing coordinate raises
/// Error(Overflow) instead of wrapping. Enumerations raise
/// Error(ResourceLimit) once more than `cap` elements would be produced.
class WeylGroup {
 public:
  explicit WeylGroup(CartanMatrix m);

  int rank() const noexcept { return matrix_.rank(); }
  const CartanMatrix& matrix() const noexcept { return matrix_; }

  WeylElement identity() const;
  WeylElement generator(int i) const;
  /// Product s_{w[0]} s_{w[1]} ... (not necessarily reduced).
  WeylElement element(const Word& w) const;
  RootVector simple_root(int i) const;

  RootVector act(const WeylElement& w, const RootVector& v) const;
  WeylElement multiply(const WeylElement& u, const WeylElement& w) const;
  WeylElement invert(const WeylElement& w) const;

  /// w(alpha_i) < 0, equivalently l(w s_i) < l(w).
  bool has_right_descent(const WeylElement& w, int i) const;

  /// Lexicographically least reduced word (greedy least left descent).
  Word reduced_word(const WeylElement& w) const;
  /// beta_k = s_{i_1} ... s_{i_{k-1}} (alpha_{i_k}).
  std::vector<RootVector> root_sequence(const Word& w) const;
  bool is_reduced(const Word& w) const;

  /// Strong Bruhat order via the subword property against reduced_word(w).
  bool bruhat_leq(const WeylElement& v, const WeylElement& w) const;
  /// Weak right order: l(w) = l(v) + l(v^-1 w).
  bool weak_leq(const WeylElement& v, const WeylElement& w) const;

  /// All elements of length <= max_length, ordered by length then discovery.
  std::vector<WeylElement> elements_up_to(int max_length, std::size_t cap = kDefaultElementCap) const;
  /// Minimal coset representatives W^J of length <= max_length.
  std::vector<WeylElement> minimal_reps(const IndexSet& j, int max_length,
                                        std::size_t cap = kDefaultElementCap) const;
  /// Number of Schubert cells of G/P_J per dimension, up to max_length.
  std::map<int, std::size_t> cell_counts(const IndexSet& j, int max_length,
                                         std::size_t cap = kDefaultElementCap) const;
  /// {x in W^J : x <= w}; w must itself lie in W^J.
  std::vector<WeylElement> closure_cells(const WeylElement& w, const IndexSet& j,
                                         std::size_t cap = kDefaultElementCap) const;

  bool is_minimal_rep(const WeylElement& w, const IndexSet& j) const;

 private:
  using Matrix = std::vector<std::int64_t>;

  void check_letter(int i) const;
  void check_same(const WeylElement& w) const;
  Matrix times_generator(const Matrix& m, int i) const;   // m * s_i
  Matrix generator_times(int i, const Matrix& m) const;   // s_i * m
  Matrix product(const Matrix& a, const Matrix& b) const;
  bool column_negative(const Matrix& m, int col) const;
  bool is_identity_matrix(const Matrix& m) const;
  // letters i_1, i_2, ... with m s_{i_1} s_{i_2} ... = 1, least index first
  Word strip_right(Matrix m) const;

  CartanMatrix matrix_;
};

}  // namespace kmfg
