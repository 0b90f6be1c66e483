#include "kmfg/pi1.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace kmfg {

std::string to_string(const Pi1Type& t) {
  std::string out;
  if (t.free_rank == 1) out = "Z";
  if (t.free_rank > 1) out = "Z^" + std::to_string(t.free_rank);
  if (t.c2_count > 0) {
    if (!out.empty()) out += " x ";
    out += t.c2_count == 1 ? "C2" : "C2^" + std::to_string(t.c2_count);
  }
  return out.empty() ? "1" : out;
}

namespace {

bool gate_holds(const CartanMatrix& m) { return is_symmetrizable(m) || is_two_spherical(m); }

// The gate for each irreducible factor.
void check_factors(const CartanMatrix& m, GateOptions opts) {
  if (opts.force) return;
  for (const auto& f : diagram_components(m)) {
    const auto sub = m.restricted(f);
    if (!gate_holds(sub))
      throw Error(ErrorCode::HypothesisRefused,
                  "hypothesis gate: the diagram" + (f.size() == static_cast<std::size_t>(m.rank())
                                                         ? std::string()
                                                         : " factor on vertices " + index_set_key(f)) +
                      " is neither symmetrizable nor two-spherical (use --force to compute anyway)");
  }
}

void require_irreducible(const CartanMatrix& m) {
  if (!is_irreducible(m))
    throw Error(ErrorCode::Reducible, "the diagram is reducible; the formula is stated for irreducible diagrams");
}

}  // namespace

void check_gate(const CartanMatrix& m, GateOptions opts) {
  if (opts.force || gate_holds(m)) return;
  throw Error(ErrorCode::HypothesisRefused,
              "hypothesis gate: the matrix is neither symmetrizable nor two-spherical (use --force to compute anyway)");
}

Pi1Type pi1_group(const CartanMatrix& m, GateOptions opts) {
  require_irreducible(m);
  check_gate(m, opts);
  const auto c = counts(AdmGraph(m));
  return {c.n_g, c.n_b};
}

CompactResult pi1_maximal_compact(const CartanMatrix& m, GateOptions opts) {
  return {pi1_group(m, opts), !is_symmetrizable(m)};
}

Pi1Type pi1_spin(const CartanMatrix& m, const KappaColouring& kappa, GateOptions opts) {
  require_irreducible(m);
  check_gate(m, opts);
  const auto c = counts(AdmGraph(m), kappa);
  return {c.n_g, *c.n_b_kappa1};
}

bool FlagEntry::abelian() const {
  if (closed_form) return true;
  return enumeration && enumeration->is_finite() && invariants.order() == enumeration->value;
}

std::string describe(const FlagEntry& f) {
  if (f.closed_form) return to_string(*f.closed_form);
  const std::string ab = to_string(f.invariants);
  if (f.infinite()) return "infinite, abelianization " + ab;
  if (!f.enumeration || !f.enumeration->is_finite())
    return "unknown (coset cap " + std::to_string(f.enumeration ? f.enumeration->value : 0) +
           " reached), abelianization " + ab;
  if (f.abelian()) return ab;
  return "non-abelian of order " + std::to_string(f.enumeration->value) + ", abelianization " + ab;
}

std::int64_t covering_degree(int n, const IndexSet& j_in) {
  const IndexSet j = make_index_set(j_in, n);
  const int e = n - static_cast<int>(j.size());
  if (e > 62) throw Error(ErrorCode::Overflow, "covering degree 2^" + std::to_string(e) + " does not fit");
  return std::int64_t{1} << e;
}

FlagEntry pi1_flag(const CartanMatrix& m, const IndexSet& j_in, std::size_t max_cosets, GateOptions opts) {
  check_factors(m, opts);
  const IndexSet j = make_index_set(j_in, m.rank());
  auto pres = flag_presentation(m, j);
  auto inv = abelianization(pres);
  std::optional<EnumerationResult> e;
  if (inv.free_rank == 0) e = todd_coxeter(pres, {}, max_cosets);
  FlagEntry entry{j, std::move(pres), std::move(inv), e, std::nullopt};

  if (is_simply_laced(m) && is_irreducible(m) && !j.empty()) {
    const int k = m.rank() - static_cast<int>(j.size());
    const AbelianInvariants expected{0, std::vector<std::int64_t>(static_cast<std::size_t>(k), 2)};
    if (!(entry.invariants == expected))
      throw Error(ErrorCode::VerificationFailed, "pi1(G/P_J) for J = " + index_set_key(j) + ": abelianization " +
                                                     to_string(entry.invariants) + " disagrees with C2^" +
                                                     std::to_string(k));
    if (e && e->is_finite() && e->value != covering_degree(m.rank(), j))
      throw Error(ErrorCode::VerificationFailed, "pi1(G/P_J) for J = " + index_set_key(j) + ": enumerated order " +
                                                     std::to_string(e->value) + " disagrees with 2^" +
                                                     std::to_string(k));
    entry.closed_form = Pi1Type{0, k};
  }
  return entry;
}

Pi1Type contribution(Colour c) {
  switch (c) {
    case Colour::Red: return {0, 0};
    case Colour::Green: return {1, 0};
    case Colour::Blue: return {0, 1};
  }
  return {};
}

Pi1Report full_report(const CartanMatrix& m, const ReportOptions& opts) {
  const GateOptions gate{opts.force};
  check_factors(m, gate);

  Pi1Report r;
  r.hypotheses = hypotheses(m);
  r.simply_laced = is_simply_laced(m);
  if (!r.hypotheses.irreducible)
    r.notes.push_back(
        "reducible diagram: outside the stated scope; the answer is the product over the irreducible factors");
  const auto factors = diagram_components(m);
  if (!std::all_of(factors.begin(), factors.end(), [&](const auto& f) { return gate_holds(m.restricted(f)); }))
    r.notes.push_back("forced: hypotheses not satisfied, the formulas are extrapolated");

  const AdmGraph g(m);
  for (const auto& c : g.components()) {
    r.components.push_back({c.vertices, c.colour, contribution(c.colour)});
    r.pi1_g.free_rank += contribution(c.colour).free_rank;
    r.pi1_g.c2_count += contribution(c.colour).c2_count;
  }
  const auto cc = counts(g);
  if (r.pi1_g != Pi1Type{cc.n_g, cc.n_b})
    throw Error(ErrorCode::VerificationFailed, "component contributions disagree with the colour counts");
  r.pi1_k = r.pi1_g;
  r.k_caveat = !r.hypotheses.symmetrizable;
  if (r.k_caveat)
    r.notes.push_back("pi1(K) = pi1(G) is only established for symmetrizable matrices");

  if (opts.include_spin)
    for (const auto& k : enumerate_kappa(g)) {
      const auto kc = counts(g, k);
      r.spin.push_back({k.bits(g), {kc.n_g, *kc.n_b_kappa1}});
    }

  if (opts.include_flags) {
    r.flags.push_back(pi1_flag(m, {}, opts.max_cosets, gate));
    for (int i = 0; i < m.rank(); ++i) r.flags.push_back(pi1_flag(m, {i}, opts.max_cosets, gate));
  }
  return r;
}

namespace {

std::string one_based(const std::vector<int>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + std::to_string(v[k] + 1);
  return out;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

nlohmann::ordered_json pi1_json(const Pi1Type& t) {
  nlohmann::ordered_json j;
  j["z"] = t.free_rank;
  j["c2"] = t.c2_count;
  return j;
}

}  // namespace

std::string render_text(const Pi1Report& r) {
  std::ostringstream out;
  out << "pi1(G) = " << to_string(r.pi1_g) << '\n';
  out << "pi1(K) = " << to_string(r.pi1_k) << (r.k_caveat ? "  (caveat: matrix not symmetrizable)" : "") << '\n';
  out << "hypotheses: irreducible " << yes_no(r.hypotheses.irreducible) << ", symmetrizable "
      << yes_no(r.hypotheses.symmetrizable) << ", two-spherical " << yes_no(r.hypotheses.two_spherical)
      << ", spherical " << yes_no(r.hypotheses.spherical) << '\n';
  out << "components:\n";
  for (const auto& c : r.components)
    out << "  {" << one_based(c.vertices) << "} " << colour_name(c.colour) << " -> " << to_string(c.contribution)
        << '\n';
  if (!r.spin.empty()) {
    out << "spin covers:\n";
    for (const auto& s : r.spin)
      out << "  kappa=" << (s.kappa.empty() ? "-" : s.kappa) << ": " << to_string(s.value) << '\n';
  }
  if (!r.flags.empty()) {
    out << "flag varieties:\n";
    for (const auto& f : r.flags) out << "  J = " << index_set_key(f.j) << ": " << describe(f) << '\n';
  }
  for (const auto& n : r.notes) out << "note: " << n << '\n';
  return out.str();
}

std::string render_json(const Pi1Report& r) {
  nlohmann::ordered_json j;
  j["hypotheses"] = {{"irreducible", r.hypotheses.irreducible},
                     {"symmetrizable", r.hypotheses.symmetrizable},
                     {"two_spherical", r.hypotheses.two_spherical},
                     {"spherical", r.hypotheses.spherical}};
  auto comps = nlohmann::ordered_json::array();
  for (const auto& c : r.components) {
    nlohmann::ordered_json row;
    std::vector<int> verts;
    for (int v : c.vertices) verts.push_back(v + 1);
    row["vertices"] = verts;
    row["colour"] = colour_name(c.colour);
    row["contribution"] = to_string(c.contribution);
    comps.push_back(row);
  }
  j["components"] = comps;
  j["pi1_G"] = pi1_json(r.pi1_g);
  j["pi1_K"] = pi1_json(r.pi1_k);
  j["pi1_K"]["caveat"] = r.k_caveat;
  auto spin = nlohmann::ordered_json::array();
  for (const auto& s : r.spin) {
    nlohmann::ordered_json row;
    row["kappa"] = s.kappa;
    row["z"] = s.value.free_rank;
    row["c2"] = s.value.c2_count;
    spin.push_back(row);
  }
  j["spin"] = spin;
  auto flags = nlohmann::ordered_json::object();
  for (const auto& f : r.flags) {
    nlohmann::ordered_json row;
    row["abelian"] = {{"z", f.invariants.free_rank}, {"torsion", f.invariants.torsion}};
    if (f.infinite())
      row["order"] = "infinite";
    else if (f.enumeration && f.enumeration->is_finite())
      row["order"] = f.enumeration->value;
    else
      row["order"] = nullptr;
    row["text"] = describe(f);
    flags[index_set_key(f.j)] = row;
  }
  j["flags"] = flags;
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

}  // namespace kmfg
