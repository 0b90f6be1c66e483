#include "kmfg/cartan.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include "json.hpp"

namespace kmfg {

namespace {

std::string entry_name(int i, int j) {
  return "a[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]";
}

}  // namespace

CartanMatrix::CartanMatrix(int rank, std::vector<int> row_major)
    : rank_(rank), entries_(std::move(row_major)) {
  if (rank_ < 1) throw Error(ErrorCode::InvalidMatrix, "rank must be positive");
  if (entries_.size() != static_cast<std::size_t>(rank_) * static_cast<std::size_t>(rank_))
    throw Error(ErrorCode::InvalidMatrix, "expected " + std::to_string(rank_ * rank_) +
                                              " entries, got " + std::to_string(entries_.size()));
  const auto& a = *this;
  for (int i = 0; i < rank_; ++i) {
    if (a(i, i) != 2)
      throw Error(ErrorCode::InvalidMatrix,
                  "diagonal violated: " + entry_name(i, i) + " = " + std::to_string(a(i, i)) + ", expected 2");
  }
  for (int i = 0; i < rank_; ++i) {
    for (int j = 0; j < rank_; ++j) {
      if (i == j) continue;
      if (a(i, j) > 0)
        throw Error(ErrorCode::InvalidMatrix, "sign violated: " + entry_name(i, j) + " = " +
                                                  std::to_string(a(i, j)) + " is positive");
      if ((a(i, j) == 0) != (a(j, i) == 0))
        throw Error(ErrorCode::InvalidMatrix,
                    "zero-symmetry violated: " + entry_name(i, j) + " = " + std::to_string(a(i, j)) +
                        " but " + entry_name(j, i) + " = " + std::to_string(a(j, i)));
    }
  }
}

CartanMatrix CartanMatrix::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != rank_)
    throw Error(ErrorCode::DimensionMismatch, "permutation size does not match rank");
  std::vector<bool> seen(perm.size(), false);
  for (int p : perm) {
    if (p < 0 || p >= rank_ || seen[static_cast<std::size_t>(p)])
      throw Error(ErrorCode::InvalidMatrix, "not a permutation of 0.." + std::to_string(rank_ - 1));
    seen[static_cast<std::size_t>(p)] = true;
  }
  std::vector<int> e(entries_.size());
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) e[static_cast<std::size_t>(i * rank_ + j)] = (*this)(perm[i], perm[j]);
  return CartanMatrix(rank_, std::move(e));
}

CartanMatrix CartanMatrix::restricted(const std::vector<int>& indices) const {
  const int k = static_cast<int>(indices.size());
  std::vector<int> e;
  e.reserve(static_cast<std::size_t>(k * k));
  for (int i : indices) {
    if (i < 0 || i >= rank_) throw Error(ErrorCode::IndexOutOfRange, "index out of range");
    for (int j : indices) e.push_back((*this)(i, j));
  }
  return CartanMatrix(k, std::move(e));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class PlainLexer {
 public:
  explicit PlainLexer(std::string_view text) : text_(text) {}

  // Next integer token, or nullopt at end of input.
  std::optional<long long> next() {
    skip_blank();
    if (pos_ >= text_.size()) return std::nullopt;
    const auto start = pos_;
    const int line = line_, col = col_;
    if (text_[pos_] == '-' || text_[pos_] == '+') advance();
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
    // a token ends at whitespace, a comment or end of input
    const bool ends_cleanly = pos_ >= text_.size() || std::isspace(static_cast<unsigned char>(text_[pos_])) ||
                              text_[pos_] == '#';
    std::string_view tok = text_.substr(start, pos_ - start);
    if (tok[0] == '+') tok.remove_prefix(1);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (!ends_cleanly || ec != std::errc() || ptr != tok.data() + tok.size()) {
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
      throw Error(ErrorCode::Syntax, "syntax error at " + std::to_string(line) + ":" + std::to_string(col) +
                                         ": expected an integer, found '" +
                                         std::string(text_.substr(start, pos_ - start)) + "'");
    }
    last_line_ = line;
    last_col_ = col;
    return value;
  }

  std::string position() const { return std::to_string(line_) + ":" + std::to_string(col_); }
  std::string last_position() const { return std::to_string(last_line_) + ":" + std::to_string(last_col_); }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_blank() {
    while (pos_ < text_.size()) {
      if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  int last_line_ = 1, last_col_ = 1;
};

CartanMatrix parse_plain(std::string_view text) {
  PlainLexer lex(text);
  const auto n = lex.next();
  if (!n) throw Error(ErrorCode::Syntax, "syntax error at " + lex.position() + ": empty input, expected rank");
  if (*n < 1 || *n > 4096)
    throw Error(ErrorCode::Syntax, "syntax error at " + lex.last_position() + ": rank must be in 1..4096");
  const int rank = static_cast<int>(*n);
  std::vector<int> entries;
  entries.reserve(static_cast<std::size_t>(rank * rank));
  for (int k = 0; k < rank * rank; ++k) {
    const auto v = lex.next();
    if (!v)
      throw Error(ErrorCode::Syntax, "syntax error at " + lex.position() + ": expected " +
                                         std::to_string(rank * rank) + " entries, found " + std::to_string(k));
    if (*v < -1000000 || *v > 1000000)
      throw Error(ErrorCode::Syntax, "syntax error at " + lex.last_position() + ": entry out of range");
    entries.push_back(static_cast<int>(*v));
  }
  if (lex.next())
    throw Error(ErrorCode::Syntax, "syntax error at " + lex.last_position() + ": trailing data after " +
                                       std::to_string(rank * rank) + " entries");
  return CartanMatrix(rank, std::move(entries));
}

CartanMatrix parse_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Syntax, std::string("syntax error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("size") || !j.contains("entries"))
    throw Error(ErrorCode::Syntax, "syntax error: JSON matrix needs fields \"size\" and \"entries\"");
  const auto& size = j["size"];
  if (!size.is_number_integer() || size.get<long long>() < 1)
    throw Error(ErrorCode::Syntax, "syntax error: \"size\" must be a positive integer");
  const int rank = size.get<int>();
  const auto& rows = j["entries"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != rank)
    throw Error(ErrorCode::Syntax, "syntax error: \"entries\" must hold " + std::to_string(rank) + " rows");
  std::vector<int> entries;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || static_cast<int>(row.size()) != rank)
      throw Error(ErrorCode::Syntax, "syntax error: row " + std::to_string(r + 1) + " must hold " +
                                         std::to_string(rank) + " integers");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!row[c].is_number_integer())
        throw Error(ErrorCode::Syntax, "syntax error: entry [" + std::to_string(r + 1) + "][" +
                                           std::to_string(c + 1) + "] is not an integer");
      entries.push_back(row[c].get<int>());
    }
  }
  return CartanMatrix(rank, std::move(entries));
}

}  // namespace

CartanMatrix parse_matrix(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json(text);
  return parse_plain(text);
}

CartanMatrix parse_matrix(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix(ss.str());
}

std::string to_plain_text(const CartanMatrix& m) {
  std::ostringstream out;
  out << m.rank() << '\n';
  for (int i = 0; i < m.rank(); ++i) {
    for (int j = 0; j < m.rank(); ++j) out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
  return out.str();
}

std::string to_json_text(const CartanMatrix& m) {
  nlohmann::ordered_json j;
  j["size"] = m.rank();
  auto rows = nlohmann::ordered_json::array();
  for (int i = 0; i < m.rank(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (int j2 = 0; j2 < m.rank(); ++j2) row.push_back(m(i, j2));
    rows.push_back(row);
  }
  j["entries"] = rows;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Named types

namespace {

struct Builder {
  explicit Builder(int n) : n(n), a(static_cast<std::size_t>(n * n), 0) {
    for (int i = 0; i < n; ++i) at(i, i) = 2;
  }
  int& at(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
  // 1-based edge helpers; `bond(p, q, m)` sets a(q,p) = -m, a(p,q) = -1.
  void simple(int p, int q) { bond(p, q, 1); }
  void bond(int p, int q, int m) {
    at(q - 1, p - 1) = -m;
    at(p - 1, q - 1) = -1;
  }
  void chain(int from, int to) {
    for (int i = from; i < to; ++i) simple(i, i + 1);
  }
  CartanMatrix build() { return CartanMatrix(n, std::move(a)); }

  int n;
  std::vector<int> a;
};

[[noreturn]] void rank_error(std::string_view name, const char* allowed) {
  throw Error(ErrorCode::UnknownName,
              "rank out of range in '" + std::string(name) + "': family allows " + allowed);
}

}  // namespace

CartanMatrix from_named(std::string_view name) {
  const std::string original(name);
  bool affine = false;
  if (!name.empty() && name.back() == '~') {
    affine = true;
    name.remove_suffix(1);
  }
  if (name.size() < 2 || !std::isupper(static_cast<unsigned char>(name[0])))
    throw Error(ErrorCode::UnknownName, "unknown type name '" + original + "'");
  const char family = name[0];
  int n = 0;
  const auto digits = name.substr(1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || digits[0] == '0')
    throw Error(ErrorCode::UnknownName, "unknown type name '" + original + "'");
  if (n > 512) rank_error(original, "at most 512 nodes");

  const int size = affine ? n + 1 : n;
  const int extra = n + 1;
  Builder b(size);
  switch (family) {
    case 'A':
      if (n < 1) rank_error(original, "n >= 1");
      b.chain(1, n);
      if (affine) {
        if (n == 1) {
          b.at(0, 1) = -2;
          b.at(1, 0) = -2;
        } else {
          b.simple(n, extra);
          b.simple(extra, 1);
        }
      }
      break;
    case 'B':
      if (n < 2 || (affine && n < 3)) rank_error(original, affine ? "n >= 3" : "n >= 2");
      b.chain(1, n - 1);
      b.bond(n - 1, n, 2);  // a(n, n-1) = -2
      if (affine) b.simple(2, extra);
      break;
    case 'C':
      if (n < 2) rank_error(original, "n >= 2");
      b.chain(1, n - 1);
      b.bond(n, n - 1, 2);  // a(n-1, n) = -2
      if (affine) b.bond(extra, 1, 2);
      break;
    case 'D':
      if (n < 4) rank_error(original, "n >= 4");
      b.chain(1, n - 1);
      b.simple(n - 2, n);
      if (affine) b.simple(2, extra);
      break;
    case 'E':
      if (n < 6 || (affine && n > 8)) rank_error(original, affine ? "6 <= n <= 8" : "n >= 6");
      b.chain(1, n - 1);
      b.simple(n - 3, n);
      if (affine) b.simple(n == 8 ? 1 : 6, extra);
      break;
    case 'F':
      if (n != 4) rank_error(original, "n = 4");
      b.simple(1, 2);
      b.bond(3, 2, 2);  // a(2,3) = -2
      b.simple(3, 4);
      if (affine) b.simple(4, extra);
      break;
    case 'G':
      if (n != 2) rank_error(original, "n = 2");
      b.bond(1, 2, 3);  // a(2,1) = -3
      if (affine) b.simple(1, extra);
      break;
    default:
      throw Error(ErrorCode::UnknownName, "unknown type family in '" + original + "'");
  }
  return b.build();
}

CartanMatrix diagram_x() {
  // 1a 1b 1c 2a 2b 2c 3a 3b 3c 4a 4b 4c 5a 5b 5c 6a
  enum : int { n1a = 1, n1b, n1c, n2a, n2b, n2c, n3a, n3b, n3c, n4a, n4b, n4c, n5a, n5b, n5c, n6a };
  Builder b(16);
  b.bond(n1a, n1b, 3);
  b.simple(n1b, n1c);
  b.bond(n2a, n1a, 2);
  b.bond(n2a, n2b, 2);
  b.bond(n2c, n1c, 2);
  b.bond(n2c, n2b, 2);
  b.bond(n2c, n3c, 2);
  b.simple(n3a, n2a);
  b.bond(n3b, n3a, 2);
  b.bond(n3b, n3c, 2);
  b.bond(n3b, n4b, 2);
  b.bond(n3c, n4c, 3);
  b.bond(n4a, n3a, 2);
  b.bond(n4a, n4b, 2);
  b.simple(n4a, n5a);
  b.bond(n5b, n4b, 2);
  b.simple(n5b, n5c);
  b.simple(n5a, n6a);
  return b.build();
}

// ---------------------------------------------------------------------------
// Predicates

Parity parity(const CartanMatrix& m, int i, int j) {
  if (i < 0 || j < 0 || i >= m.rank() || j >= m.rank())
    throw Error(ErrorCode::IndexOutOfRange, "parity index out of range for rank " + std::to_string(m.rank()));
  return Parity::from_entry(m(i, j));
}

namespace {

using Ratio = boost::rational<long long>;

// Positive diagonal d with d_i a(i,j) = d_j a(j,i), or nullopt.
std::optional<std::vector<Ratio>> symmetrizer(const CartanMatrix& m) {
  const int n = m.rank();
  std::vector<std::optional<Ratio>> d(static_cast<std::size_t>(n));
  for (int root = 0; root < n; ++root) {
    if (d[static_cast<std::size_t>(root)]) continue;
    d[static_cast<std::size_t>(root)] = Ratio(1);
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int i = q.front();
      q.pop();
      for (int j = 0; j < n; ++j) {
        if (j == i || m(i, j) == 0) continue;
        const Ratio dj = *d[static_cast<std::size_t>(i)] * Ratio(m(i, j), m(j, i));
        if (!d[static_cast<std::size_t>(j)]) {
          d[static_cast<std::size_t>(j)] = dj;
          q.push(j);
        } else if (*d[static_cast<std::size_t>(j)] != dj) {
          return std::nullopt;
        }
      }
    }
  }
  std::vector<Ratio> out;
  for (auto& x : d) out.push_back(*x);
  return out;
}

}  // namespace

bool is_symmetrizable(const CartanMatrix& m) { return symmetrizer(m).has_value(); }

bool is_two_spherical(const CartanMatrix& m) {
  for (int i = 0; i < m.rank(); ++i)
    for (int j = i + 1; j < m.rank(); ++j)
      if (m(i, j) * m(j, i) > 3) return false;
  return true;
}

std::vector<std::vector<int>> diagram_components(const CartanMatrix& m) {
  const int n = m.rank();
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<int>> comps;
  for (int s = 0; s < n; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    std::vector<int> comp;
    std::vector<int> stack{s};
    seen[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      comp.push_back(i);
      for (int j = 0; j < n; ++j)
        if (j != i && m(i, j) != 0 && !seen[static_cast<std::size_t>(j)]) {
          seen[static_cast<std::size_t>(j)] = 1;
          stack.push_back(j);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

IndexSet make_index_set(std::vector<int> indices, int rank) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  for (int i : indices)
    if (i < 0 || i >= rank)
      throw Error(ErrorCode::IndexOutOfRange,
                  "index " + std::to_string(i + 1) + " out of range 1.." + std::to_string(rank));
  return indices;
}

std::string index_set_key(const IndexSet& set) {
  std::string out = "{";
  for (std::size_t k = 0; k < set.size(); ++k) out += (k ? "," : "") + std::to_string(set[k] + 1);
  return out + "}";
}

bool is_irreducible(const CartanMatrix& m) { return diagram_components(m).size() == 1; }

bool is_simply_laced(const CartanMatrix& m) {
  for (int i = 0; i < m.rank(); ++i)
    for (int j = 0; j < m.rank(); ++j)
      if (i != j && m(i, j) < -1) return false;
  return true;
}

bool is_spherical(const CartanMatrix& m) {
  using boost::multiprecision::cpp_int;
  const auto d = symmetrizer(m);
  if (!d) return false;
  const int n = m.rank();
  long long scale = 1;
  for (const auto& x : *d) scale = std::lcm(scale, x.denominator());
  // Symmetrized integer matrix S = scale * D * A, then Sylvester's criterion
  // via fraction-free elimination: the k-th pivot is the k-th leading minor.
  std::vector<std::vector<cpp_int>> s(static_cast<std::size_t>(n), std::vector<cpp_int>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    const cpp_int di = cpp_int((*d)[static_cast<std::size_t>(i)].numerator()) *
                       (scale / (*d)[static_cast<std::size_t>(i)].denominator());
    for (int j = 0; j < n; ++j) s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = di * m(i, j);
  }
  cpp_int prev = 1;
  for (int k = 0; k < n; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    if (s[uk][uk] <= 0) return false;
    for (auto i = uk + 1; i < static_cast<std::size_t>(n); ++i)
      for (auto j = uk + 1; j < static_cast<std::size_t>(n); ++j)
        s[i][j] = (s[i][j] * s[uk][uk] - s[i][uk] * s[uk][j]) / prev;
    prev = s[uk][uk];
  }
  return true;
}

HypothesisReport hypotheses(const CartanMatrix& m) {
  return {is_irreducible(m), is_symmetrizable(m), is_two_spherical(m), is_spherical(m)};
}

}  // namespace kmfg
