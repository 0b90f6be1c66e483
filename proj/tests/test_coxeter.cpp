#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "corpus.hpp"
#include "doctest.h"
#include "kmfg/coxeter.hpp"
#include "oracles.hpp"

using namespace kmfg;

namespace {

const CartanMatrix kAffineA1(2, {2, -2, -2, 2});

RootVector rv(std::vector<std::int64_t> c) { return RootVector{std::move(c)}; }

template <class F>
ErrorCode code_of(F f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Usage;
}

// Image of a Weyl element of A_{n-1} in S_n, read off a reduced word.
oracle::Perm perm_of(const WeylGroup& w, const WeylElement& e) {
  return oracle::perm_of_word(w.rank() + 1, w.reduced_word(e));
}

oracle::Perm compose(const oracle::Perm& p, const oracle::Perm& q) {
  oracle::Perm r(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) r[k] = p[static_cast<std::size_t>(q[k])];
  return r;
}

oracle::Perm inverse(const oracle::Perm& p) {
  oracle::Perm r(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) r[static_cast<std::size_t>(p[k])] = static_cast<int>(k);
  return r;
}

Word random_word(std::mt19937& rng, int rank, int len) {
  std::uniform_int_distribution<int> letter(0, rank - 1);
  Word w;
  for (int k = 0; k < len; ++k) w.push_back(letter(rng));
  return w;
}

std::vector<std::size_t> histogram(const std::vector<WeylElement>& elems) {
  std::vector<std::size_t> h;
  for (const auto& e : elems) {
    if (h.size() <= static_cast<std::size_t>(e.length())) h.resize(static_cast<std::size_t>(e.length()) + 1, 0);
    ++h[static_cast<std::size_t>(e.length())];
  }
  return h;
}

}  // namespace

TEST_CASE("action on roots") {
  const WeylGroup a2(from_named("A2"));
  CHECK(a2.act(a2.identity(), a2.simple_root(0)) == rv({1, 0}));
  CHECK(a2.act(a2.generator(0), a2.simple_root(1)) == rv({1, 1}));
  CHECK(a2.act(a2.generator(0), a2.simple_root(0)) == rv({-1, 0}));
  CHECK(a2.act(a2.generator(0), a2.simple_root(0)).is_negative());
  CHECK(rv({0, 1}).is_positive());
  CHECK_FALSE(rv({1, -1}).is_positive());
  CHECK_FALSE(rv({1, -1}).is_negative());
  CHECK(rv({0, 0}).is_zero());

  // B2: a(2,1) = -2 makes s_2(alpha_1) = alpha_1 + 2 alpha_2
  const WeylGroup b2(from_named("B2"));
  CHECK(b2.act(b2.generator(1), b2.simple_root(0)) == rv({1, 2}));
  CHECK(b2.act(b2.generator(0), b2.simple_root(1)) == rv({1, 1}));
}

TEST_CASE("products and inverses") {
  const WeylGroup a2(from_named("A2"));
  CHECK(a2.multiply(a2.generator(0), a2.generator(0)).is_identity());
  CHECK(a2.element({0, 1, 0}) == a2.element({1, 0, 1}));
  CHECK(a2.invert(a2.element({0, 1})) == a2.element({1, 0}));
  CHECK(a2.multiply(a2.element({0, 1}), a2.element({1})) == a2.generator(0));

  const WeylGroup g2(from_named("G2"));
  CHECK(g2.element({0, 1, 0, 1, 0, 1}) == g2.element({1, 0, 1, 0, 1, 0}));
  CHECK_FALSE(g2.element({0, 1, 0, 1}) == g2.element({1, 0, 1, 0}));

  std::mt19937 rng(31);
  for (const auto& name : corpus::small_named()) {
    const WeylGroup w(from_named(name));
    for (int t = 0; t < 20; ++t) {
      const auto u = w.element(random_word(rng, w.rank(), 7));
      const auto v = w.element(random_word(rng, w.rank(), 7));
      CHECK(w.multiply(u, w.invert(u)).is_identity());
      CHECK(w.invert(w.multiply(u, v)) == w.multiply(w.invert(v), w.invert(u)));
      CHECK(w.invert(u).length() == u.length());
    }
  }
}

TEST_CASE("length and reduced words") {
  const WeylGroup a2(from_named("A2"));
  CHECK(a2.identity().length() == 0);
  CHECK(a2.element({0, 1, 0}).length() == 3);
  CHECK(a2.reduced_word(a2.identity()).empty());
  CHECK(a2.reduced_word(a2.element({1, 0, 1})) == Word{0, 1, 0});
  CHECK(a2.reduced_word(a2.generator(1)) == Word{1});

  const WeylGroup aff(kAffineA1);
  for (int k = 1; k <= 10; ++k) {
    Word w;
    for (int r = 0; r < k; ++r) w.insert(w.end(), {0, 1});
    CHECK(aff.element(w).length() == 2 * k);
    CHECK(aff.reduced_word(aff.element(w)) == w);
  }
}

TEST_CASE("symmetric groups against permutations") {
  for (int n = 3; n <= 5; ++n) {
    const WeylGroup w(from_named("A" + std::to_string(n - 1)));
    const auto elems = w.elements_up_to(100);
    REQUIRE(elems.size() == oracle::all_perms(n).size());
    std::set<oracle::Perm> seen;
    for (const auto& e : elems) {
      const auto p = perm_of(w, e);
      seen.insert(p);
      CHECK(e.length() == oracle::inversions(p));
      const auto words = oracle::reduced_words(p);
      CHECK(w.reduced_word(e) == *std::min_element(words.begin(), words.end()));
      // every reduced word names the same element
      for (const auto& word : words) CHECK(w.element(word) == e);
    }
    CHECK(seen.size() == elems.size());
  }
}

TEST_CASE("bruhat order") {
  const WeylGroup a2(from_named("A2"));
  CHECK(a2.bruhat_leq(a2.identity(), a2.element({0, 1, 0})));
  CHECK(a2.bruhat_leq(a2.generator(1), a2.element({0, 1, 0})));
  CHECK_FALSE(a2.bruhat_leq(a2.element({0, 1}), a2.element({1, 0})));
  CHECK(a2.weak_leq(a2.generator(0), a2.generator(0)));
  CHECK(a2.weak_leq(a2.generator(0), a2.element({0, 1})));
  CHECK_FALSE(a2.weak_leq(a2.generator(1), a2.element({0, 1})));
  CHECK(a2.bruhat_leq(a2.generator(1), a2.element({0, 1})));

  for (int n = 3; n <= 4; ++n) {
    const WeylGroup w(from_named("A" + std::to_string(n - 1)));
    const auto elems = w.elements_up_to(100);
    for (const auto& v : elems)
      for (const auto& u : elems) {
        const auto pv = perm_of(w, v), pu = perm_of(w, u);
        const bool strong = w.bruhat_leq(v, u);
        CHECK(strong == oracle::bruhat_leq(pv, pu));
        const bool weak = oracle::inversions(pu) ==
                          oracle::inversions(pv) + oracle::inversions(compose(inverse(pv), pu));
        CHECK(w.weak_leq(v, u) == weak);
        if (weak) CHECK(strong);
      }
  }

  const WeylGroup aff(kAffineA1);
  const auto elems = aff.elements_up_to(4);
  REQUIRE(elems.size() == 9);
  for (const auto& v : elems)
    for (const auto& u : elems) {
      if (aff.weak_leq(v, u)) CHECK(aff.bruhat_leq(v, u));
      // infinite dihedral: strictly shorter elements are always below
      if (v.length() < u.length()) CHECK(aff.bruhat_leq(v, u));
      if (v.length() == u.length()) CHECK(aff.bruhat_leq(v, u) == (v == u));
    }
}

TEST_CASE("group orders and length distributions") {
  const std::map<std::string, std::vector<int>> degrees{
      {"A1", {2}},          {"A2", {2, 3}},          {"A3", {2, 3, 4}},    {"A4", {2, 3, 4, 5}},
      {"B2", {2, 4}},       {"B3", {2, 4, 6}},       {"B4", {2, 4, 6, 8}}, {"C2", {2, 4}},
      {"C3", {2, 4, 6}},    {"C4", {2, 4, 6, 8}},    {"D4", {2, 4, 4, 6}}, {"G2", {2, 6}},
      {"F4", {2, 6, 8, 12}}};
  const std::map<std::string, std::size_t> orders{{"A1", 2},  {"A2", 6},   {"A3", 24}, {"A4", 120}, {"B2", 8},
                                                  {"B3", 48}, {"B4", 384}, {"C2", 8},  {"C3", 48},  {"C4", 384},
                                                  {"D4", 192}, {"G2", 12},  {"F4", 1152}};
  for (const auto& [name, d] : degrees) {
    CAPTURE(name);
    const WeylGroup w(from_named(name));
    const auto elems = w.elements_up_to(1000);
    CHECK(elems.size() == orders.at(name));
    const auto poly = oracle::poincare(d);
    const auto h = histogram(elems);
    REQUIRE(h.size() == poly.size());
    for (std::size_t k = 0; k < h.size(); ++k) CHECK(static_cast<std::int64_t>(h[k]) == poly[k]);
    // lengths come out in non-decreasing order
    CHECK(std::is_sorted(elems.begin(), elems.end(),
                         [](const WeylElement& a, const WeylElement& b) { return a.length() < b.length(); }));
  }

  CHECK(WeylGroup(kAffineA1).elements_up_to(5).size() == 11);
  CHECK(WeylGroup(from_named("E10")).elements_up_to(0).size() == 1);
  CHECK(WeylGroup(from_named("E10")).elements_up_to(1).size() == 11);
}

TEST_CASE("random words in infinite groups") {
  std::mt19937 rng(32);
  for (const auto* name : {"E10", "A1~", "A3~", "C2~", "G2~", "E9", "B3~"}) {
    CAPTURE(name);
    const WeylGroup w(from_named(name));
    for (int t = 0; t < 40; ++t) {
      const auto word = random_word(rng, w.rank(), 12);
      const auto e = w.element(word);
      CHECK(e.length() <= static_cast<int>(word.size()));
      CHECK((static_cast<int>(word.size()) - e.length()) % 2 == 0);
      const auto red = w.reduced_word(e);
      CHECK(static_cast<int>(red.size()) == e.length());
      CHECK(w.is_reduced(red));
      CHECK(w.element(red) == e);
      CHECK(w.is_reduced(word) == (e.length() == static_cast<int>(word.size())));
      for (int i = 0; i < w.rank(); ++i) {
        const auto next = w.multiply(e, w.generator(i));
        CHECK(std::abs(next.length() - e.length()) == 1);
        CHECK(w.has_right_descent(e, i) == (next.length() < e.length()));
      }
    }
  }
}

TEST_CASE("root sequences") {
  const WeylGroup a2(from_named("A2"));
  CHECK(a2.root_sequence({0}) == std::vector<RootVector>{rv({1, 0})});
  CHECK(a2.root_sequence({0, 1, 0}) == std::vector<RootVector>{rv({1, 0}), rv({1, 1}), rv({0, 1})});
  CHECK(a2.root_sequence({0, 0}) == std::vector<RootVector>{rv({1, 0}), rv({-1, 0})});
  CHECK(a2.is_reduced({0, 1, 0}));
  CHECK_FALSE(a2.is_reduced({0, 1, 0, 1}));
  CHECK(a2.is_reduced({}));

  for (int n = 3; n <= 4; ++n) {
    const WeylGroup w(from_named("A" + std::to_string(n - 1)));
    for (const auto& p : oracle::all_perms(n))
      for (const auto& word : oracle::reduced_words(p)) {
        const auto roots = w.root_sequence(word);
        CHECK(std::all_of(roots.begin(), roots.end(), [](const RootVector& r) { return r.is_positive(); }));
        CHECK(std::set<RootVector>(roots.begin(), roots.end()).size() == roots.size());
      }
  }

  std::mt19937 rng(33);
  const WeylGroup a3(from_named("A3"));
  int nonreduced = 0;
  while (nonreduced < 100) {
    const auto word = random_word(rng, 3, 2 + static_cast<int>(rng() % 6));
    const bool by_length = a3.element(word).length() == static_cast<int>(word.size());
    CHECK(a3.is_reduced(word) == by_length);
    // reduced iff all partial roots are positive
    const auto roots = a3.root_sequence(word);
    CHECK(by_length ==
          std::all_of(roots.begin(), roots.end(), [](const RootVector& r) { return r.is_positive(); }));
    if (!by_length) ++nonreduced;
  }
}

TEST_CASE("minimal coset representatives and cells") {
  const WeylGroup a2(from_named("A2"));
  CHECK(a2.minimal_reps({0, 1}, 5).size() == 1);
  const auto reps = a2.minimal_reps({1}, 3);
  REQUIRE(reps.size() == 3);
  CHECK(histogram(reps) == std::vector<std::size_t>{1, 1, 1});
  CHECK(WeylGroup(from_named("A3")).minimal_reps({1, 2}, 6).size() == 4);

  CHECK(a2.cell_counts({}, 3) == std::map<int, std::size_t>{{0, 1}, {1, 2}, {2, 2}, {3, 1}});
  CHECK(a2.cell_counts({1}, 3) == std::map<int, std::size_t>{{0, 1}, {1, 1}, {2, 1}});
  CHECK(WeylGroup(from_named("A1")).cell_counts({}, 1) == std::map<int, std::size_t>{{0, 1}, {1, 1}});
  CHECK(WeylGroup(from_named("A3")).cell_counts({1, 2}, 6) ==
        std::map<int, std::size_t>{{0, 1}, {1, 1}, {2, 1}, {3, 1}});
  for (int l = 1; l <= 8; ++l) {
    const auto cc = WeylGroup(kAffineA1).cell_counts({}, l);
    CHECK(cc.size() == static_cast<std::size_t>(l) + 1);
    CHECK(cc.at(0) == 1);
    for (int d = 1; d <= l; ++d) CHECK(cc.at(d) == 2);
  }

  // coset-by-coset brute force in S4 for every J
  const WeylGroup a3(from_named("A3"));
  const auto all = a3.elements_up_to(10);
  for (unsigned mask = 0; mask < 8; ++mask) {
    IndexSet j;
    for (int i = 0; i < 3; ++i)
      if (mask >> i & 1U) j.push_back(i);
    CAPTURE(index_set_key(j));
    std::vector<oracle::Perm> parabolic;
    for (const auto& u : all) {
      const auto word = a3.reduced_word(u);
      if (std::all_of(word.begin(), word.end(), [&](int i) { return std::count(j.begin(), j.end(), i) > 0; }))
        parabolic.push_back(perm_of(a3, u));
    }
    std::map<std::set<oracle::Perm>, oracle::Perm> shortest;
    for (const auto& e : all) {
      const auto p = perm_of(a3, e);
      std::set<oracle::Perm> coset;
      for (const auto& u : parabolic) coset.insert(compose(p, u));
      auto it = shortest.find(coset);
      if (it == shortest.end() || oracle::inversions(p) < oracle::inversions(it->second)) shortest[coset] = p;
    }
    std::set<oracle::Perm> expected, mine;
    for (const auto& [c, p] : shortest) expected.insert(p);
    const auto got = a3.minimal_reps(j, 10);
    for (const auto& e : got) {
      mine.insert(perm_of(a3, e));
      CHECK(a3.is_minimal_rep(e, j));
    }
    CHECK(mine == expected);
    CHECK(got.size() * parabolic.size() == all.size());

    // closures against the subword oracle
    for (const auto& w : got) {
      std::set<oracle::Perm> below, cl;
      for (const auto& x : got)
        if (oracle::bruhat_leq(perm_of(a3, x), perm_of(a3, w))) below.insert(perm_of(a3, x));
      for (const auto& x : a3.closure_cells(w, j)) cl.insert(perm_of(a3, x));
      CHECK(cl == below);
    }
  }
}

TEST_CASE("closures") {
  const WeylGroup a2(from_named("A2"));
  const auto cl = a2.closure_cells(a2.identity(), {});
  REQUIRE(cl.size() == 1);
  CHECK(cl[0].is_identity());

  std::set<Word> words;
  for (const auto& e : a2.closure_cells(a2.element({0, 1}), {})) words.insert(a2.reduced_word(e));
  CHECK(words == std::set<Word>{{}, {0}, {1}, {0, 1}});

  words.clear();
  for (const auto& e : a2.closure_cells(a2.generator(0), {1})) words.insert(a2.reduced_word(e));
  CHECK(words == std::set<Word>{{}, {0}});

  CHECK(code_of([&] { a2.closure_cells(a2.generator(0), {0}); }) == ErrorCode::NotMinimalRepresentative);
}

TEST_CASE("errors and caps") {
  const WeylGroup a3(from_named("A3"));
  CHECK(code_of([&] { a3.elements_up_to(10, 5); }) == ErrorCode::ResourceLimit);
  CHECK(code_of([&] { a3.elements_up_to(10, 24); }) == ErrorCode::Usage);
  CHECK(code_of([&] { a3.minimal_reps({}, 10, 23); }) == ErrorCode::ResourceLimit);
  CHECK(code_of([&] { WeylGroup(kAffineA1).elements_up_to(100000, 1000); }) == ErrorCode::ResourceLimit);
  CHECK(code_of([&] { a3.generator(3); }) == ErrorCode::IndexOutOfRange);
  CHECK(code_of([&] { a3.element({0, -1}); }) == ErrorCode::IndexOutOfRange);

  const WeylGroup wild(CartanMatrix(2, {2, -1000000, -1000000, 2}));
  CHECK(code_of([&] { wild.element({0, 1, 0, 1, 0, 1, 0, 1, 0, 1}); }) == ErrorCode::Overflow);
  CHECK(wild.element({0, 1}).length() == 2);
}
