#include "kmfg/fpgroup.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace kmfg {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "integer overflow in Smith normal form");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "integer overflow in Smith normal form");
  return r;
}

std::int64_t checked_abs(std::int64_t a) {
  if (a == INT64_MIN) throw Error(ErrorCode::Overflow, "integer overflow in Smith normal form");
  return a < 0 ? -a : a;
}

}  // namespace

FpWord free_reduce(const FpWord& w) {
  FpWord out;
  out.reserve(w.size());
  for (const Letter& l : w) {
    if (!out.empty() && out.back().gen == l.gen && out.back().exp == -l.exp)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

FpWord inverse(const FpWord& w) {
  FpWord out(w.rbegin(), w.rend());
  for (auto& l : out) l.exp = -l.exp;
  return out;
}

FpPresentation::FpPresentation(std::vector<std::string> names, std::vector<FpWord> relators)
    : names_(std::move(names)) {
  if (names_.empty()) throw Error(ErrorCode::InvalidPresentation, "presentation needs at least one generator");
  std::set<std::string> seen;
  for (const auto& n : names_)
    if (!seen.insert(n).second) throw Error(ErrorCode::InvalidPresentation, "duplicate generator name '" + n + "'");
  relators_.reserve(relators.size());
  for (auto& r : relators) {
    for (const Letter& l : r) {
      if (l.gen < 0 || l.gen >= generator_count())
        throw Error(ErrorCode::InvalidPresentation, "relator uses generator index " + std::to_string(l.gen + 1) +
                                                        " but there are " + std::to_string(generator_count()));
      if (l.exp != 1 && l.exp != -1) throw Error(ErrorCode::InvalidPresentation, "letter exponents must be +1 or -1");
    }
    relators_.push_back(free_reduce(r));
  }
}

FpPresentation FpPresentation::numbered(int count, std::vector<FpWord> relators) {
  std::vector<std::string> names;
  for (int i = 1; i <= count; ++i) names.push_back("x" + std::to_string(i));
  return FpPresentation(std::move(names), std::move(relators));
}

// ---------------------------------------------------------------------------
// Serialization

std::string to_text(const FpPresentation& p) {
  std::ostringstream out;
  out << '<';
  for (int i = 0; i < p.generator_count(); ++i) out << (i ? "," : "") << p.generator_names()[static_cast<std::size_t>(i)];
  out << " |";
  bool first = true;
  for (const auto& r : p.relators()) {
    out << (first ? " " : ", ");
    first = false;
    if (r.empty()) {
      out << '1';
      continue;
    }
    for (std::size_t k = 0; k < r.size(); ++k) {
      out << (k ? "*" : "") << p.generator_names()[static_cast<std::size_t>(r[k].gen)];
      if (r[k].exp < 0) out << "^-1";
    }
  }
  out << '>';
  return out.str();
}

std::string to_json_text(const FpPresentation& p) {
  nlohmann::ordered_json j;
  j["generators"] = p.generator_names();
  auto rels = nlohmann::ordered_json::array();
  for (const auto& r : p.relators()) {
    auto word = nlohmann::ordered_json::array();
    for (const auto& l : r) word.push_back({l.gen + 1, l.exp});
    rels.push_back(word);
  }
  j["relators"] = rels;
  return j.dump();
}

namespace {

class PresentationParser {
 public:
  explicit PresentationParser(std::string_view text) : text_(text) {}

  FpPresentation parse() {
    expect('<');
    std::vector<std::string> names{identifier()};
    while (peek() == ',') {
      ++pos_;
      names.push_back(identifier());
    }
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], static_cast<int>(i));
    std::vector<FpWord> relators;
    if (peek() == '|') {
      ++pos_;
      if (peek() != '>') {
        relators.push_back(word(index));
        while (peek() == ',') {
          ++pos_;
          relators.push_back(word(index));
        }
      }
    }
    expect('>');
    if (peek() != '\0') fail("trailing characters after '>'");
    try {
      return FpPresentation(std::move(names), std::move(relators));
    } catch (const Error& e) {
      throw Error(ErrorCode::Syntax, std::string("syntax error: ") + e.what());
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1, col = 1;
    for (std::size_t k = 0; k < pos_ && k < text_.size(); ++k) {
      if (text_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::Syntax,
                "syntax error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }

  char peek() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier() {
    const char c = peek();
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) fail("expected a generator name");
    const auto start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  long long integer() {
    peek();
    const auto start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string_view tok = text_.substr(start, pos_ - start);
    if (!tok.empty() && tok[0] == '+') tok.remove_prefix(1);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || v < -1000 || v > 1000) {
      pos_ = start;
      fail("expected an exponent in -1000..1000");
    }
    return v;
  }

  FpWord word(const std::map<std::string, int>& index) {
    FpWord w;
    if (peek() == '1') {
      ++pos_;
      return w;
    }
    for (;;) {
      const auto at = pos_;
      const std::string name = identifier();
      const auto it = index.find(name);
      if (it == index.end()) {
        pos_ = at;
        fail("unknown generator '" + name + "'");
      }
      long long e = 1;
      if (peek() == '^') {
        ++pos_;
        e = integer();
      }
      for (long long k = 0; k < std::llabs(e); ++k) w.push_back({it->second, e < 0 ? -1 : 1});
      if (peek() != '*') break;
      ++pos_;
    }
    return w;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

FpPresentation parse_presentation_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Syntax, std::string("syntax error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("generators") || !j.contains("relators") || !j["generators"].is_array() ||
      !j["relators"].is_array())
    throw Error(ErrorCode::Syntax, "syntax error: JSON presentation needs arrays \"generators\" and \"relators\"");
  std::vector<std::string> names;
  for (const auto& g : j["generators"]) {
    if (!g.is_string()) throw Error(ErrorCode::Syntax, "syntax error: generator names must be strings");
    names.push_back(g.get<std::string>());
  }
  std::vector<FpWord> relators;
  for (const auto& r : j["relators"]) {
    if (!r.is_array()) throw Error(ErrorCode::Syntax, "syntax error: each relator must be an array");
    FpWord w;
    for (const auto& l : r) {
      if (!l.is_array() || l.size() != 2 || !l[0].is_number_integer() || !l[1].is_number_integer())
        throw Error(ErrorCode::Syntax, "syntax error: letters must be [generator, exponent] integer pairs");
      w.push_back({l[0].get<int>() - 1, l[1].get<int>()});
    }
    relators.push_back(std::move(w));
  }
  return FpPresentation(std::move(names), std::move(relators));
}

}  // namespace

FpPresentation parse_presentation(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_presentation_json(text);
  return PresentationParser(text).parse();
}

// ---------------------------------------------------------------------------
// Abelian invariants

std::optional<std::int64_t> AbelianInvariants::order() const {
  if (free_rank > 0) return std::nullopt;
  std::int64_t n = 1;
  for (auto d : torsion) n = checked_mul(n, d);
  return n;
}

std::string to_string(const AbelianInvariants& a) {
  std::vector<std::string> parts;
  if (a.free_rank == 1) parts.emplace_back("Z");
  if (a.free_rank > 1) parts.push_back("Z^" + std::to_string(a.free_rank));
  // group equal cyclic factors: C2 x C2 x C4 -> C2^2 x C4
  for (std::size_t k = 0; k < a.torsion.size();) {
    std::size_t e = k;
    while (e < a.torsion.size() && a.torsion[e] == a.torsion[k]) ++e;
    std::string f = "C" + std::to_string(a.torsion[k]);
    if (e - k > 1) f += "^" + std::to_string(e - k);
    parts.push_back(std::move(f));
    k = e;
  }
  if (parts.empty()) return "1";
  std::string out = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) out += " x " + parts[k];
  return out;
}

std::vector<std::int64_t> smith_diagonal(IntMatrix a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a.front().size() : 0;
  for (const auto& r : a)
    if (r.size() != cols) throw Error(ErrorCode::DimensionMismatch, "ragged matrix");

  std::vector<std::int64_t> diag;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // pivot: least nonzero absolute value in the trailing block
      std::size_t pr = rows, pc = cols;
      std::int64_t best = 0;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (best == 0 || checked_abs(a[i][j]) < best)) {
            best = checked_abs(a[i][j]);
            pr = i;
            pc = j;
          }
      if (best == 0) return diag;
      std::swap(a[t], a[pr]);
      for (auto& r : a) std::swap(r[t], r[pc]);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const std::int64_t q = a[i][t] / a[t][t];
        if (q != 0)
          for (std::size_t j = t; j < cols; ++j) a[i][j] = checked_add(a[i][j], checked_mul(-q, a[t][j]));
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        const std::int64_t q = a[t][j] / a[t][t];
        if (q != 0)
          for (std::size_t i = t; i < rows; ++i) a[i][j] = checked_add(a[i][j], checked_mul(-q, a[i][t]));
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      // divisibility d_t | rest; fold an offending row in and go again
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      for (std::size_t j = t; j < cols; ++j) a[t][j] = checked_add(a[t][j], a[bad][j]);
    }
    diag.push_back(checked_abs(a[t][t]));
  }
  return diag;
}

AbelianInvariants abelianization(const FpPresentation& p) {
  const auto n = static_cast<std::size_t>(p.generator_count());
  IntMatrix rows;
  for (const auto& r : p.relators()) {
    std::vector<std::int64_t> row(n, 0);
    for (const auto& l : r) row[static_cast<std::size_t>(l.gen)] += l.exp;
    if (std::any_of(row.begin(), row.end(), [](auto v) { return v != 0; })) rows.push_back(std::move(row));
  }
  const auto diag = smith_diagonal(std::move(rows));
  AbelianInvariants out;
  out.free_rank = static_cast<int>(n - diag.size());
  for (auto d : diag)
    if (d > 1) out.torsion.push_back(d);
  return out;
}

// ---------------------------------------------------------------------------
// Presentations attached to a Cartan matrix

FpWord commutation_relator(const CartanMatrix& m, int i, int j, int gi, int gj) {
  return {{gi, 1}, {gj, parity(m, i, j).value()}, {gi, -1}, {gj, -1}};
}

namespace {

std::vector<std::string> names_for(const IndexSet& j) {
  std::vector<std::string> names;
  for (int i : j) names.push_back("x" + std::to_string(i + 1));
  return names;
}

std::vector<FpWord> pair_relators(const CartanMatrix& m, const IndexSet& j) {
  std::vector<FpWord> rels;
  for (std::size_t a = 0; a < j.size(); ++a)
    for (std::size_t b = 0; b < j.size(); ++b)
      if (a != b) rels.push_back(commutation_relator(m, j[a], j[b], static_cast<int>(a), static_cast<int>(b)));
  return rels;
}

IndexSet all_indices(int n) {
  IndexSet out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i;
  return out;
}

}  // namespace

FpPresentation h_j_presentation(const CartanMatrix& m, const IndexSet& j_in) {
  const IndexSet j = make_index_set(j_in, m.rank());
  if (j.empty()) throw Error(ErrorCode::EmptySubset, "H_J needs a nonempty index set");
  return FpPresentation(names_for(j), pair_relators(m, j));
}

FpPresentation component_presentation(const CartanMatrix& m, const IndexSet& j_in) {
  const IndexSet j = make_index_set(j_in, m.rank());
  if (j.empty()) throw Error(ErrorCode::EmptySubset, "component group needs a nonempty index set");
  auto rels = pair_relators(m, j);
  // x_k x_i^eps(k,i) x_k^-1 x_i^-1 with x_k = 1 leaves x_i^(eps(k,i)-1)
  for (std::size_t a = 0; a < j.size(); ++a) {
    const int i = j[a];
    for (int k = 0; k < m.rank(); ++k) {
      if (std::binary_search(j.begin(), j.end(), k) || !parity(m, k, i).odd()) continue;
      rels.push_back({{static_cast<int>(a), 1}, {static_cast<int>(a), 1}});
      break;
    }
  }
  return FpPresentation(names_for(j), std::move(rels));
}

FpPresentation flag_presentation(const CartanMatrix& m, const IndexSet& j_in) {
  const IndexSet j = make_index_set(j_in, m.rank());
  const IndexSet all = all_indices(m.rank());
  auto rels = pair_relators(m, all);
  for (int k : j) rels.push_back({{k, 1}});
  return FpPresentation(names_for(all), std::move(rels));
}

FpPresentation cw_presentation(const CartanMatrix& m, const IndexSet& j_in, const WeylGroup& w) {
  if (!(w.matrix() == m)) throw Error(ErrorCode::DimensionMismatch, "Weyl group belongs to a different matrix");
  const IndexSet j = make_index_set(j_in, m.rank());
  std::vector<FpWord> rels;
  for (int k : j) rels.push_back({{k, 1}});
  // the 2-cells: s_a s_b in W^J of length 2
  for (const auto& e : w.minimal_reps(j, 2)) {
    if (e.length() != 2) continue;
    const Word word = w.reduced_word(e);
    const auto matches = [&](int a, int b) { return w.element({a, b}) == e; };
    for (int a : {word[0], word[1]}) {
      const int b = a == word[0] ? word[1] : word[0];
      if (matches(a, b)) rels.push_back(commutation_relator(m, a, b, a, b));
    }
  }
  return FpPresentation(names_for(all_indices(m.rank())), std::move(rels));
}

// ---------------------------------------------------------------------------
// Component groups

ComponentGroupDescriptor classify_component_group(Colour colour, int size) {
  if (size < 1) throw Error(ErrorCode::InvalidPresentation, "component size must be at least 1");
  if (size > 60) throw Error(ErrorCode::Overflow, "component too large for an exact order");
  ComponentGroupDescriptor d{colour, size, false, std::nullopt, std::nullopt};
  switch (colour) {
    case Colour::Red:
      d.order = std::int64_t{1} << size;
      d.abelian = AbelianInvariants{0, std::vector<std::int64_t>(static_cast<std::size_t>(size), 2)};
      break;
    case Colour::Green:
      if (size != 1) throw Error(ErrorCode::InvalidPresentation, "a green component is a single vertex");
      d.infinite_cyclic = true;
      d.abelian = AbelianInvariants{1, {}};
      break;
    case Colour::Blue:
      if (size > 59) throw Error(ErrorCode::Overflow, "component too large for an exact order");
      d.order = std::int64_t{1} << (size + 1);
      break;
  }
  return d;
}

const char* check_status_name(CheckStatus s) noexcept {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

bool VerificationReport::any(CheckStatus s) const {
  return std::any_of(checks.begin(), checks.end(), [s](const Check& c) { return c.status == s; });
}

VerificationReport verify_component(const CartanMatrix& m, const IndexSet& j_in, Colour colour,
                                    std::size_t max_cosets) {
  const IndexSet j = make_index_set(j_in, m.rank());
  const auto expected = classify_component_group(colour, static_cast<int>(j.size()));
  const auto pres = component_presentation(m, j);
  const auto ab = abelianization(pres);
  VerificationReport report;
  const std::string where = index_set_key(j) + " (" + colour_name(colour) + ")";

  if (expected.abelian) {
    const bool ok = ab == *expected.abelian;
    report.checks.push_back({"abelianization " + where, ok ? CheckStatus::Pass : CheckStatus::Fail,
                             "expected " + to_string(*expected.abelian) + ", got " + to_string(ab)});
  } else {
    // blue: only the order is predicted; the abelian quotient must be a finite 2-group dividing it
    const auto ab_order = ab.order();
    const bool ok = ab_order && *expected.order % *ab_order == 0;
    report.checks.push_back({"abelianization " + where, ok ? CheckStatus::Pass : CheckStatus::Fail,
                             "abelian quotient " + to_string(ab) + " against order " +
                                 std::to_string(*expected.order)});
  }

  const auto e = todd_coxeter(pres, {}, max_cosets);
  if (expected.order) {
    if (e.is_finite()) {
      const bool ok = e.value == *expected.order;
      report.checks.push_back({"order " + where, ok ? CheckStatus::Pass : CheckStatus::Fail,
                               "expected " + std::to_string(*expected.order) + ", enumerated " +
                                   std::to_string(e.value)});
    } else {
      report.checks.push_back({"order " + where, CheckStatus::Inconclusive,
                               "coset cap " + std::to_string(e.value) + " reached"});
    }
    if (expected.abelian && e.is_finite()) {
      const bool ok = ab.order() == e.value;
      report.checks.push_back({"abelian " + where, ok ? CheckStatus::Pass : CheckStatus::Fail,
                               "order of abelian quotient equals group order"});
    }
  } else {
    // Z: enumeration must not terminate, the free rank decides
    const bool ok = !e.is_finite();
    report.checks.push_back({"order " + where, ok ? CheckStatus::Pass : CheckStatus::Fail,
                             ok ? "infinite (coset cap " + std::to_string(e.value) + " reached, free rank 1)"
                                : "enumeration terminated with " + std::to_string(e.value) + " cosets"});
  }
  return report;
}

}  // namespace kmfg
