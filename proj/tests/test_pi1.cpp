#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "json.hpp"
#include "kmfg/pi1.hpp"
#include "oracles.hpp"

using namespace kmfg;

namespace {

template <class F>
ErrorCode code_of(F f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Usage;
}

const Pi1Type kZ{1, 0}, kC2{0, 1}, kTrivial{0, 0};

// rank 3, cycle products -1 and -8, a(1,3) a(3,1) = 4
const CartanMatrix kUngated(3, {2, -1, -4, -2, 2, -1, -1, -1, 2});

CartanMatrix block_sum(const CartanMatrix& a, const CartanMatrix& b) {
  const int n = a.rank() + b.rank();
  std::vector<int> e(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i < a.rank() && j < a.rank()) e[static_cast<std::size_t>(i * n + j)] = a(i, j);
      if (i >= a.rank() && j >= a.rank()) e[static_cast<std::size_t>(i * n + j)] = b(i - a.rank(), j - a.rank());
    }
  return CartanMatrix(n, e);
}

// counts straight from the vertex-level oracle
Pi1Type oracle_pi1(const CartanMatrix& m) {
  const auto vc = oracle::colour_vertices(m.rank(), [&](int i, int j) { return parity(m, i, j).value(); });
  Pi1Type t;
  for (int i = 0; i < m.rank(); ++i) {
    if (vc.component[static_cast<std::size_t>(i)] != i) continue;
    if (vc.colour[static_cast<std::size_t>(i)] == 'g') ++t.free_rank;
    if (vc.colour[static_cast<std::size_t>(i)] == 'b') ++t.c2_count;
  }
  return t;
}

}  // namespace

TEST_CASE("rendering") {
  CHECK(to_string(kTrivial) == "1");
  CHECK(to_string(kZ) == "Z");
  CHECK(to_string(kC2) == "C2");
  CHECK(to_string(Pi1Type{2, 2}) == "Z^2 x C2^2");
  CHECK(to_string(Pi1Type{1, 3}) == "Z x C2^3");
  CHECK(to_string(Pi1Type{0, 4}) == "C2^4");
}

TEST_CASE("spherical types") {
  CHECK(pi1_group(from_named("A1")) == kZ);
  for (int n = 2; n <= 8; ++n) {
    CHECK(pi1_group(from_named("A" + std::to_string(n))) == kC2);
    CHECK(pi1_group(from_named("C" + std::to_string(n))) == kZ);
  }
  CHECK(pi1_group(from_named("B2")) == kZ);
  for (int n = 3; n <= 8; ++n) CHECK(pi1_group(from_named("B" + std::to_string(n))) == kC2);
  for (int n = 4; n <= 8; ++n) CHECK(pi1_group(from_named("D" + std::to_string(n))) == kC2);
  for (const auto* name : {"E6", "E7", "E8", "F4", "G2"}) CHECK(pi1_group(from_named(name)) == kC2);
}

TEST_CASE("indefinite and affine types") {
  CHECK(pi1_group(from_named("E10")) == kC2);
  CHECK(pi1_group(diagram_x()) == Pi1Type{2, 2});
  CHECK(pi1_group(from_named("A1~")) == Pi1Type{2, 0});
  CHECK(pi1_group(CartanMatrix(2, {2, -2, -2, 2})) == Pi1Type{2, 0});
}

TEST_CASE("maximal compact subgroup") {
  const auto an = pi1_maximal_compact(from_named("A4"));
  CHECK(an.value == kC2);
  CHECK_FALSE(an.caveat);
  CHECK(pi1_maximal_compact(from_named("B2")).value == kZ);
  CHECK(pi1_maximal_compact(from_named("F4")).value == kC2);
  const auto x = pi1_maximal_compact(diagram_x());
  CHECK(x.value == Pi1Type{2, 2});
  CHECK(x.caveat == !is_symmetrizable(diagram_x()));
}

TEST_CASE("hypothesis gate") {
  const CartanMatrix aff(2, {2, -2, -2, 2});
  CHECK_FALSE(is_two_spherical(aff));
  CHECK(is_symmetrizable(aff));
  CHECK_NOTHROW(check_gate(aff));

  CHECK_FALSE(is_symmetrizable(kUngated));
  CHECK_FALSE(is_two_spherical(kUngated));
  CHECK(code_of([] { pi1_group(kUngated); }) == ErrorCode::HypothesisRefused);
  CHECK(code_of([] { full_report(kUngated); }) == ErrorCode::HypothesisRefused);
  CHECK(code_of([] { pi1_flag(kUngated, {}); }) == ErrorCode::HypothesisRefused);
  CHECK(pi1_group(kUngated, GateOptions{true}) == oracle_pi1(kUngated));
  ReportOptions forced;
  forced.force = true;
  const auto r = full_report(kUngated, forced);
  CHECK_FALSE(r.notes.empty());

  // non-symmetrizable but two-spherical passes
  const CartanMatrix cyc(3, {2, -1, -1, -2, 2, -1, -1, -1, 2});
  CHECK_FALSE(is_symmetrizable(cyc));
  CHECK(is_two_spherical(cyc));
  CHECK_NOTHROW(pi1_group(cyc));
  CHECK(pi1_maximal_compact(cyc).caveat);

  const auto reducible = block_sum(from_named("A2"), from_named("A1"));
  CHECK(code_of([&] { pi1_group(reducible); }) == ErrorCode::Reducible);
  const auto rr = full_report(reducible);
  CHECK(rr.pi1_g == Pi1Type{1, 1});
  CHECK_FALSE(rr.notes.empty());
  // the gate looks at each factor
  CHECK(code_of([&] { full_report(block_sum(from_named("A1"), kUngated)); }) == ErrorCode::HypothesisRefused);
}

TEST_CASE("spin covers") {
  for (const auto* name : {"A2", "A3", "A4", "A5", "D4", "E6", "E10"}) {
    CAPTURE(name);
    const auto m = from_named(name);
    const AdmGraph g(m);
    CHECK(enumerate_kappa(g).size() == 2);
    CHECK(pi1_spin(m, KappaColouring::constant(g, 2)) == kTrivial);
    CHECK(pi1_spin(m, KappaColouring::constant(g, 1)) == kC2);
  }
  const auto c3 = from_named("C3");
  const AdmGraph g(c3);
  for (const auto& k : enumerate_kappa(g)) CHECK(pi1_spin(c3, k) == kZ);
  CHECK(code_of([] { pi1_spin(kUngated, KappaColouring::constant(AdmGraph(kUngated), 1)); }) ==
        ErrorCode::HypothesisRefused);
}

TEST_CASE("properties on random matrices") {
  std::mt19937 rng(51);
  int tested = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const int n = 1 + trial % 8;
    const auto m = corpus::random_gcm(rng, n);
    if (!is_irreducible(m)) continue;
    ++tested;
    const GateOptions force{true};
    const auto t = pi1_group(m, force);
    CHECK(t == oracle_pi1(m));

    const AdmGraph g(m);
    const auto cc = counts(g);
    const int comps = static_cast<int>(g.components().size());
    CHECK(t.free_rank + t.c2_count <= comps);
    CHECK((t.free_rank + t.c2_count == comps) == (cc.n_r == 0));

    CHECK(pi1_spin(m, KappaColouring::constant(g, 1), force) == Pi1Type{t.free_rank, cc.n_b});
    CHECK(pi1_spin(m, KappaColouring::constant(g, 2), force) == Pi1Type{t.free_rank, 0});
    for (const auto& k : enumerate_kappa(g)) CHECK(pi1_spin(m, k, force).free_rank == t.free_rank);

    for (int r = 0; r < 3; ++r) CHECK(pi1_group(m.permuted(corpus::random_perm(rng, n)), force) == t);

    if (is_simply_laced(m) && n >= 2) CHECK(t == kC2);
    CHECK(code_of([&] { pi1_group(m); }) ==
          (is_symmetrizable(m) || is_two_spherical(m) ? ErrorCode::Usage : ErrorCode::HypothesisRefused));
  }
  CHECK(tested > 200);
}

TEST_CASE("flag varieties") {
  const auto a3 = pi1_flag(from_named("A3"), {0});
  REQUIRE(a3.closed_form.has_value());
  CHECK(*a3.closed_form == Pi1Type{0, 2});
  CHECK(a3.enumeration == EnumerationResult::finite(4));
  CHECK(describe(a3) == "C2^2");

  for (const auto* name : {"A2", "B3", "G2", "E10", "A1~"}) {
    const auto m = from_named(name);
    IndexSet all;
    for (int i = 0; i < m.rank(); ++i) all.push_back(i);
    const auto f = pi1_flag(m, all);
    CHECK(f.invariants == AbelianInvariants{});
    CHECK(f.enumeration == EnumerationResult::finite(1));
    CHECK(describe(f) == "1");
  }

  const auto b3 = pi1_flag(from_named("B3"), {});
  CHECK(b3.enumeration == EnumerationResult::finite(16));
  CHECK_FALSE(b3.closed_form.has_value());

  // Z factors make the group infinite; the enumeration is skipped
  const auto c2 = pi1_flag(from_named("C2"), {});
  CHECK(c2.infinite());
  CHECK_FALSE(c2.enumeration.has_value());
  CHECK(describe(c2).rfind("infinite", 0) == 0);

  // reducible simply-laced: no closed form, the A1 factor stays free
  const auto split = pi1_flag(block_sum(from_named("A2"), from_named("A1")), {0});
  CHECK_FALSE(split.closed_form.has_value());
  CHECK(split.invariants == AbelianInvariants{1, {2}});

  const auto capped = pi1_flag(from_named("A4"), {}, 10);
  CHECK_FALSE(capped.enumeration->is_finite());
  CHECK(describe(capped).find("unknown") != std::string::npos);
}

TEST_CASE("simply-laced closed form for every J") {
  for (const auto* name : {"A2", "A3", "A4", "A5", "D4", "D5"}) {
    const auto m = from_named(name);
    for (unsigned mask = 1; mask < (1U << m.rank()); ++mask) {
      IndexSet j;
      for (int i = 0; i < m.rank(); ++i)
        if (mask >> i & 1U) j.push_back(i);
      const auto f = pi1_flag(m, j);
      const int k = m.rank() - static_cast<int>(j.size());
      REQUIRE(f.closed_form.has_value());
      CHECK(*f.closed_form == Pi1Type{0, k});
      CHECK(f.enumeration == EnumerationResult::finite(covering_degree(m.rank(), j)));
    }
  }
}

TEST_CASE("covering degree") {
  CHECK(covering_degree(3, {}) == 8);
  CHECK(covering_degree(3, {0, 1, 2}) == 1);
  CHECK(covering_degree(2, {0}) == 2);
  CHECK(covering_degree(10, {0, 0, 3}) == 256);
  CHECK(code_of([] { covering_degree(2, {2}); }) == ErrorCode::IndexOutOfRange);
  CHECK(code_of([] { covering_degree(70, {}); }) == ErrorCode::Overflow);
}

TEST_CASE("blue component index") {
  // |H_J| / |H~| = 2^|J| with |H~| = 2 for blue components
  for (const auto& name : corpus::small_named()) {
    const auto m = from_named(name);
    const AdmGraph g(m);
    for (const auto& c : g.components()) {
      if (c.colour != Colour::Blue) continue;
      CAPTURE(name);
      const auto e = todd_coxeter(component_presentation(m, c.vertices));
      REQUIRE(e.is_finite());
      const auto size = static_cast<int>(c.vertices.size());
      CHECK(e.value % 2 == 0);
      CHECK(e.value / 2 == covering_degree(size, {}));
    }
  }
}

TEST_CASE("full report") {
  const auto d4 = full_report(from_named("D4"));
  CHECK(d4.pi1_g == kC2);
  CHECK(d4.pi1_k == kC2);
  CHECK_FALSE(d4.k_caveat);
  CHECK(d4.simply_laced);
  REQUIRE(d4.spin.size() == 2);
  CHECK(d4.spin[0].value == kC2);
  CHECK(d4.spin[1].value == kTrivial);
  REQUIRE(d4.flags.size() == 5);
  CHECK(d4.flags[0].j.empty());
  CHECK(d4.flags[0].enumeration == EnumerationResult::finite(32));
  for (std::size_t k = 1; k < 5; ++k) CHECK(d4.flags[k].closed_form == Pi1Type{0, 3});

  CHECK(full_report(from_named("G2")).pi1_g == kC2);
  const auto x = full_report(diagram_x());
  CHECK(x.pi1_g == Pi1Type{2, 2});
  CHECK(x.k_caveat);
  CHECK(x.spin.size() == 16);

  for (const auto& name : corpus::small_named()) {
    const auto r = full_report(from_named(name));
    Pi1Type sum;
    for (const auto& c : r.components) {
      CHECK(c.contribution == contribution(c.colour));
      sum.free_rank += c.contribution.free_rank;
      sum.c2_count += c.contribution.c2_count;
    }
    CHECK(sum == r.pi1_g);
    CHECK(render_text(r).rfind("pi1(G) = " + to_string(r.pi1_g) + "\n", 0) == 0);
  }
}

TEST_CASE("JSON report") {
  const auto j = nlohmann::json::parse(render_json(full_report(from_named("A1"))));
  CHECK(j["pi1_G"]["z"] == 1);
  CHECK(j["pi1_G"]["c2"] == 0);
  for (const auto* key : {"hypotheses", "components", "pi1_G", "pi1_K", "spin", "flags", "notes"})
    CHECK(j.contains(key));

  const auto c3 = nlohmann::json::parse(render_json(full_report(from_named("C3"))));
  REQUIRE(c3["components"].size() == 2);
  CHECK(c3["components"][0]["vertices"] == nlohmann::json::array({1, 2}));
  CHECK(c3["components"][0]["colour"] == "red");
  CHECK(c3["components"][1]["contribution"] == "Z");
  CHECK(c3["spin"].size() == 2);
  CHECK(c3["flags"].contains("{}"));
  CHECK(c3["flags"].contains("{3}"));
  CHECK(c3["flags"]["{}"]["order"] == "infinite");
  CHECK(c3["flags"]["{3}"]["abelian"]["torsion"].is_array());
  CHECK(c3["pi1_K"]["caveat"] == false);
  CHECK(render_json(full_report(from_named("C3"))) == render_json(full_report(from_named("C3"))));
}
