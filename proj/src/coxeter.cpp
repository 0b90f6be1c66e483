#include "kmfg/coxeter.hpp"

#include <algorithm>
#include <unordered_set>

#include <boost/container_hash/hash.hpp>

namespace kmfg {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "root lattice coordinate overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "root lattice coordinate overflow");
  return r;
}

using MatrixSet = std::unordered_set<std::vector<std::int64_t>, boost::hash<std::vector<std::int64_t>>>;

void enforce_cap(std::size_t produced, std::size_t cap) {
  if (produced > cap)
    throw Error(ErrorCode::ResourceLimit, "Weyl group enumeration exceeded the element cap of " + std::to_string(cap));
}

}  // namespace

bool RootVector::is_zero() const noexcept {
  return std::all_of(coords.begin(), coords.end(), [](auto c) { return c == 0; });
}

bool RootVector::is_positive() const noexcept {
  return !is_zero() && std::all_of(coords.begin(), coords.end(), [](auto c) { return c >= 0; });
}

bool RootVector::is_negative() const noexcept {
  return !is_zero() && std::all_of(coords.begin(), coords.end(), [](auto c) { return c <= 0; });
}

bool WeylElement::is_identity() const noexcept {
  for (int r = 0; r < rank_; ++r)
    for (int c = 0; c < rank_; ++c)
      if ((*this)(r, c) != (r == c ? 1 : 0)) return false;
  return true;
}

WeylGroup::WeylGroup(CartanMatrix m) : matrix_(std::move(m)) {}

void WeylGroup::check_letter(int i) const {
  if (i < 0 || i >= rank())
    throw Error(ErrorCode::IndexOutOfRange, "generator index " + std::to_string(i + 1) + " out of range 1.." +
                                                std::to_string(rank()));
}

void WeylGroup::check_same(const WeylElement& w) const {
  if (w.rank() != rank()) throw Error(ErrorCode::DimensionMismatch, "element belongs to a group of another rank");
}

WeylGroup::Matrix WeylGroup::times_generator(const Matrix& m, int i) const {
  // column j of m s_i is m e_j - a(i,j) m e_i
  const int n = rank();
  Matrix out = m;
  for (int j = 0; j < n; ++j) {
    const int a = matrix_(i, j);
    if (a == 0) continue;
    for (int r = 0; r < n; ++r) {
      const auto idx = static_cast<std::size_t>(r * n + j);
      out[idx] = checked_add(m[idx], checked_mul(-a, m[static_cast<std::size_t>(r * n + i)]));
    }
  }
  return out;
}

WeylGroup::Matrix WeylGroup::generator_times(int i, const Matrix& m) const {
  // only row i changes: row_i - sum_j a(i,j) row_j
  const int n = rank();
  Matrix out = m;
  for (int c = 0; c < n; ++c) {
    std::int64_t acc = m[static_cast<std::size_t>(i * n + c)];
    for (int j = 0; j < n; ++j) {
      const int a = matrix_(i, j);
      if (a != 0) acc = checked_add(acc, checked_mul(-a, m[static_cast<std::size_t>(j * n + c)]));
    }
    out[static_cast<std::size_t>(i * n + c)] = acc;
  }
  return out;
}

WeylGroup::Matrix WeylGroup::product(const Matrix& a, const Matrix& b) const {
  const int n = rank();
  Matrix out(static_cast<std::size_t>(n * n), 0);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) {
      const auto ark = a[static_cast<std::size_t>(r * n + k)];
      if (ark == 0) continue;
      for (int c = 0; c < n; ++c) {
        auto& dst = out[static_cast<std::size_t>(r * n + c)];
        dst = checked_add(dst, checked_mul(ark, b[static_cast<std::size_t>(k * n + c)]));
      }
    }
  return out;
}

bool WeylGroup::column_negative(const Matrix& m, int col) const {
  // w(alpha_col) is a real root, so its coordinates share one sign
  const int n = rank();
  for (int r = 0; r < n; ++r) {
    const auto v = m[static_cast<std::size_t>(r * n + col)];
    if (v != 0) return v < 0;
  }
  return false;
}

bool WeylGroup::is_identity_matrix(const Matrix& m) const {
  const int n = rank();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (m[static_cast<std::size_t>(r * n + c)] != (r == c ? 1 : 0)) return false;
  return true;
}

Word WeylGroup::strip_right(Matrix m) const {
  Word letters;
  while (!is_identity_matrix(m)) {
    int i = 0;
    while (i < rank() && !column_negative(m, i)) ++i;
    // a non-identity element always has a right descent
    if (i == rank()) throw Error(ErrorCode::InvalidMatrix, "matrix is not a Weyl group element");
    m = times_generator(m, i);
    letters.push_back(i);
  }
  return letters;
}

WeylElement WeylGroup::identity() const {
  const int n = rank();
  Matrix m(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i * n + i)] = 1;
  return WeylElement(n, std::move(m), 0);
}

WeylElement WeylGroup::generator(int i) const {
  check_letter(i);
  return WeylElement(rank(), times_generator(identity().action_, i), 1);
}

WeylElement WeylGroup::element(const Word& w) const {
  Matrix m = identity().action_;
  for (int i : w) {
    check_letter(i);
    m = times_generator(m, i);
  }
  const int len = static_cast<int>(strip_right(m).size());
  return WeylElement(rank(), std::move(m), len);
}

RootVector WeylGroup::simple_root(int i) const {
  check_letter(i);
  RootVector v{std::vector<std::int64_t>(static_cast<std::size_t>(rank()), 0)};
  v.coords[static_cast<std::size_t>(i)] = 1;
  return v;
}

RootVector WeylGroup::act(const WeylElement& w, const RootVector& v) const {
  check_same(w);
  if (static_cast<int>(v.coords.size()) != rank())
    throw Error(ErrorCode::DimensionMismatch, "vector has " + std::to_string(v.coords.size()) +
                                                  " coordinates, group rank is " + std::to_string(rank()));
  const int n = rank();
  RootVector out{std::vector<std::int64_t>(static_cast<std::size_t>(n), 0)};
  for (int r = 0; r < n; ++r) {
    std::int64_t acc = 0;
    for (int c = 0; c < n; ++c) acc = checked_add(acc, checked_mul(w(r, c), v.coords[static_cast<std::size_t>(c)]));
    out.coords[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

WeylElement WeylGroup::multiply(const WeylElement& u, const WeylElement& w) const {
  check_same(u);
  check_same(w);
  Matrix m = product(u.action_, w.action_);
  const int len = static_cast<int>(strip_right(m).size());
  return WeylElement(rank(), std::move(m), len);
}

WeylElement WeylGroup::invert(const WeylElement& w) const {
  check_same(w);
  // w s_{i_1} ... s_{i_k} = 1  =>  w^-1 = s_{i_1} ... s_{i_k}
  Matrix m = identity().action_;
  for (int i : strip_right(w.action_)) m = times_generator(m, i);
  return WeylElement(rank(), std::move(m), w.length());
}

bool WeylGroup::has_right_descent(const WeylElement& w, int i) const {
  check_same(w);
  check_letter(i);
  return column_negative(w.action_, i);
}

Word WeylGroup::reduced_word(const WeylElement& w) const {
  // stripping w^-1 from the right with least index = stripping w from the left
  return strip_right(invert(w).action_);
}

std::vector<RootVector> WeylGroup::root_sequence(const Word& w) const {
  std::vector<RootVector> betas;
  betas.reserve(w.size());
  Matrix prefix = identity().action_;
  const int n = rank();
  for (int i : w) {
    check_letter(i);
    RootVector beta{std::vector<std::int64_t>(static_cast<std::size_t>(n))};
    for (int r = 0; r < n; ++r) beta.coords[static_cast<std::size_t>(r)] = prefix[static_cast<std::size_t>(r * n + i)];
    betas.push_back(std::move(beta));
    prefix = times_generator(prefix, i);
  }
  return betas;
}

bool WeylGroup::is_reduced(const Word& w) const { return element(w).length() == static_cast<int>(w.size()); }

bool WeylGroup::bruhat_leq(const WeylElement& v, const WeylElement& w) const {
  check_same(v);
  check_same(w);
  if (v.length() > w.length()) return false;
  const Word word = reduced_word(w);
  Matrix cur = v.action_;
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    if (column_negative(cur, *it)) cur = times_generator(cur, *it);
  return is_identity_matrix(cur);
}

bool WeylGroup::weak_leq(const WeylElement& v, const WeylElement& w) const {
  return w.length() == v.length() + multiply(invert(v), w).length();
}

std::vector<WeylElement> WeylGroup::elements_up_to(int max_length, std::size_t cap) const {
  if (max_length < 0) throw Error(ErrorCode::Usage, "length bound must be non-negative");
  std::vector<WeylElement> out{identity()};
  enforce_cap(out.size(), cap);
  MatrixSet previous;
  MatrixSet current{out.front().action_};
  std::size_t layer_begin = 0;
  for (int len = 1; len <= max_length; ++len) {
    MatrixSet next;
    const std::size_t layer_end = out.size();
    for (std::size_t k = layer_begin; k < layer_end; ++k) {
      for (int i = 0; i < rank(); ++i) {
        // lengths of w and w s_i differ by one, so anything already seen
        // one layer down is shorter
        Matrix m = times_generator(out[k].action_, i);
        if (previous.count(m) || next.count(m)) continue;
        next.insert(m);
        out.push_back(WeylElement(rank(), std::move(m), len));
        enforce_cap(out.size(), cap);
      }
    }
    if (next.empty()) break;
    layer_begin = layer_end;
    previous = std::move(current);
    current = std::move(next);
  }
  return out;
}

bool WeylGroup::is_minimal_rep(const WeylElement& w, const IndexSet& j) const {
  check_same(w);
  return std::none_of(j.begin(), j.end(), [&](int k) { return has_right_descent(w, k); });
}

std::vector<WeylElement> WeylGroup::minimal_reps(const IndexSet& j_in, int max_length, std::size_t cap) const {
  if (max_length < 0) throw Error(ErrorCode::Usage, "length bound must be non-negative");
  const IndexSet j = make_index_set(j_in, rank());
  // W^J is closed under removing a left descent, so it grows layer by layer
  // through left multiplication.
  std::vector<WeylElement> out{identity()};
  enforce_cap(out.size(), cap);
  MatrixSet previous;
  MatrixSet current{out.front().action_};
  std::size_t layer_begin = 0;
  for (int len = 1; len <= max_length; ++len) {
    MatrixSet next;
    const std::size_t layer_end = out.size();
    for (std::size_t k = layer_begin; k < layer_end; ++k) {
      for (int i = 0; i < rank(); ++i) {
        Matrix m = generator_times(i, out[k].action_);
        if (previous.count(m) || next.count(m)) continue;
        if (std::any_of(j.begin(), j.end(), [&](int jj) { return column_negative(m, jj); })) continue;
        next.insert(m);
        out.push_back(WeylElement(rank(), std::move(m), len));
        enforce_cap(out.size(), cap);
      }
    }
    if (next.empty()) break;
    layer_begin = layer_end;
    previous = std::move(current);
    current = std::move(next);
  }
  return out;
}

std::map<int, std::size_t> WeylGroup::cell_counts(const IndexSet& j, int max_length, std::size_t cap) const {
  std::map<int, std::size_t> hist;
  for (const auto& w : minimal_reps(j, max_length, cap)) ++hist[w.length()];
  return hist;
}

std::vector<WeylElement> WeylGroup::closure_cells(const WeylElement& w, const IndexSet& j_in, std::size_t cap) const {
  const IndexSet j = make_index_set(j_in, rank());
  if (!is_minimal_rep(w, j))
    throw Error(ErrorCode::NotMinimalRepresentative,
                "element has a right descent in J, so it is not a minimal coset representative");
  std::vector<WeylElement> out;
  for (auto& x : minimal_reps(j, w.length(), cap))
    if (bruhat_leq(x, w)) out.push_back(std::move(x));
  return out;
}

}  // namespace kmfg
