#include "kmfg/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kmfg/adm.hpp"
#include "kmfg/cartan.hpp"
#include "kmfg/coxeter.hpp"
#include "kmfg/fpgroup.hpp"
#include "kmfg/pi1.hpp"

namespace kmfg {

namespace {

using ojson = nlohmann::ordered_json;

struct Common {
  std::string type;
  std::string matrix;
  std::string format = "text";
  bool force = false;
};

struct Loaded {
  CartanMatrix m;
  std::string label;
};

Loaded load(const Common& c) {
  if (c.type.empty() == c.matrix.empty())
    throw Error(ErrorCode::Usage, "give exactly one of --type NAME or --matrix FILE");
  if (!c.type.empty()) return {from_named(c.type), c.type};
  if (c.matrix == "-") return {parse_matrix(std::cin), "<stdin>"};
  std::ifstream in(c.matrix);
  if (!in) throw Error(ErrorCode::Io, "cannot read matrix file '" + c.matrix + "'");
  return {parse_matrix(in), c.matrix};
}

long long parse_number(const std::string& s, const std::string& what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::Usage, what + ": '" + s + "' is not an integer");
  return v;
}

// "1,3" (1-based) -> {0,2}; "" and "{}" give the empty set
std::vector<int> parse_list(std::string s, int rank, const std::string& what) {
  if (s.size() >= 2 && s.front() == '{' && s.back() == '}') s = s.substr(1, s.size() - 2);
  std::vector<int> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto v = parse_number(tok, what);
    if (v < 1 || v > rank)
      throw Error(ErrorCode::IndexOutOfRange,
                  what + ": index " + tok + " out of range 1.." + std::to_string(rank));
    out.push_back(static_cast<int>(v - 1));
  }
  return out;
}

std::size_t coset_cap(const std::optional<long long>& flag) {
  long long v = static_cast<long long>(kDefaultCosetCap);
  if (flag) {
    v = *flag;
  } else if (const char* env = std::getenv("KMFG_MAX_COSETS"); env && *env) {
    v = parse_number(env, "KMFG_MAX_COSETS");
  }
  if (v < 1) throw Error(ErrorCode::Usage, "coset cap must be positive");
  return static_cast<std::size_t>(v);
}

void require_format(const Common& c, std::initializer_list<const char*> allowed, const std::string& cmd) {
  for (const char* f : allowed)
    if (c.format == f) return;
  throw Error(ErrorCode::UnsupportedFormat, "format '" + c.format + "' is not available for '" + cmd + "'");
}

std::string word_text(const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) out += (k ? " " : "") + std::to_string(w[k] + 1);
  return out;
}

std::vector<int> one_based(const std::vector<int>& v) {
  std::vector<int> out;
  for (int x : v) out.push_back(x + 1);
  return out;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

// ---------------------------------------------------------------------------

int cmd_info(const Common& c, std::ostream& out) {
  require_format(c, {"text", "json"}, "info");
  const auto [m, label] = load(c);
  const auto h = hypotheses(m);
  const AdmGraph g(m);
  const auto cc = counts(g);
  if (c.format == "json") {
    ojson j;
    j["input"] = label;
    j["rank"] = m.rank();
    auto rows = ojson::array();
    for (int i = 0; i < m.rank(); ++i) {
      auto row = ojson::array();
      for (int k = 0; k < m.rank(); ++k) row.push_back(m(i, k));
      rows.push_back(row);
    }
    j["matrix"] = rows;
    j["hypotheses"] = {{"irreducible", h.irreducible},
                       {"symmetrizable", h.symmetrizable},
                       {"two_spherical", h.two_spherical},
                       {"spherical", h.spherical}};
    j["simply_laced"] = is_simply_laced(m);
    j["counts"] = {{"n_r", cc.n_r}, {"n_g", cc.n_g}, {"n_b", cc.n_b}};
    out << j.dump(2) << '\n';
    return 0;
  }
  out << "input: " << label << '\n' << "rank: " << m.rank() << '\n' << "matrix:\n";
  for (int i = 0; i < m.rank(); ++i) {
    out << ' ';
    for (int k = 0; k < m.rank(); ++k) out << ' ' << m(i, k);
    out << '\n';
  }
  out << "irreducible: " << yes_no(h.irreducible) << '\n'
      << "symmetrizable: " << yes_no(h.symmetrizable) << '\n'
      << "two-spherical: " << yes_no(h.two_spherical) << '\n'
      << "spherical: " << yes_no(h.spherical) << '\n'
      << "simply-laced: " << yes_no(is_simply_laced(m)) << '\n'
      << "adm components: " << g.components().size() << " (red " << cc.n_r << ", green " << cc.n_g << ", blue "
      << cc.n_b << ")\n";
  return 0;
}

int cmd_pi1(const Common& c, std::size_t cap, std::ostream& out, std::ostream& err) {
  require_format(c, {"text", "json"}, "pi1");
  const auto m = load(c).m;
  ReportOptions opts;
  opts.max_cosets = cap;
  opts.force = c.force;
  const auto r = full_report(m, opts);
  out << (c.format == "json" ? render_json(r) : render_text(r));
  for (const auto& f : r.flags)
    if (!f.closed_form && !f.infinite() && !(f.enumeration && f.enumeration->is_finite()))
      err << "warning: pi1(G/P_J) for J = " << index_set_key(f.j) << " undecided at coset cap " << cap << '\n';
  return 0;
}

int cmd_spin(const Common& c, const std::string& kappa, bool all, std::ostream& out) {
  require_format(c, {"text", "json"}, "spin");
  if (!kappa.empty() && all) throw Error(ErrorCode::Usage, "--kappa and --all are exclusive");
  const auto m = load(c).m;
  ReportOptions opts;
  opts.force = c.force;
  opts.include_flags = false;
  const auto r = full_report(m, opts);
  std::vector<SpinRow> rows;
  if (!kappa.empty()) {
    const AdmGraph g(m);
    const auto k = KappaColouring::from_bits(g, kappa);
    const auto kc = counts(g, k);
    rows.push_back({k.bits(g), {kc.n_g, *kc.n_b_kappa1}});
  } else {
    rows = r.spin;
  }
  if (c.format == "json") {
    ojson j;
    auto arr = ojson::array();
    for (const auto& s : rows) arr.push_back({{"kappa", s.kappa}, {"z", s.value.free_rank}, {"c2", s.value.c2_count}});
    j["spin"] = arr;
    j["notes"] = r.notes;
    out << j.dump(2) << '\n';
    return 0;
  }
  for (const auto& s : rows)
    out << "pi1(Spin(kappa=" << (s.kappa.empty() ? "-" : s.kappa) << ")) = " << to_string(s.value) << '\n';
  for (const auto& n : r.notes) out << "note: " << n << '\n';
  return 0;
}

int cmd_flag(const Common& c, const std::string& set, std::size_t cap, std::ostream& out) {
  require_format(c, {"text", "json"}, "flag");
  const auto m = load(c).m;
  const auto j = make_index_set(parse_list(set, m.rank(), "--set"), m.rank());
  const auto f = pi1_flag(m, j, cap, GateOptions{c.force});
  const auto degree = covering_degree(m.rank(), j);
  if (c.format == "json") {
    ojson o;
    o["J"] = one_based(f.j);
    o["presentation"] = to_text(f.presentation);
    o["abelian"] = {{"z", f.invariants.free_rank}, {"torsion", f.invariants.torsion}};
    if (f.infinite())
      o["order"] = "infinite";
    else if (f.enumeration && f.enumeration->is_finite())
      o["order"] = f.enumeration->value;
    else
      o["order"] = nullptr;
    o["text"] = describe(f);
    o["covering_degree"] = degree;
    out << o.dump(2) << '\n';
  } else {
    out << "pi1(G/P_J) = " << describe(f) << '\n'
        << "J = " << index_set_key(f.j) << '\n'
        << "presentation: " << to_text(f.presentation) << '\n'
        << "abelianization: " << to_string(f.invariants) << '\n';
    if (f.infinite())
      out << "order: infinite\n";
    else if (f.enumeration && f.enumeration->is_finite())
      out << "order: " << f.enumeration->value << '\n';
    else
      out << "order: unknown (coset cap " << f.enumeration->value << " reached)\n";
    out << "covering K/K_J -> G/P_J: degree " << degree << '\n';
  }
  // an undecided finite-looking group is a cap exhaustion
  if (!f.closed_form && !f.infinite() && !(f.enumeration && f.enumeration->is_finite()))
    throw Error(ErrorCode::ResourceLimit,
                "coset enumeration hit the cap of " + std::to_string(cap) + " (raise --max-cosets)");
  return 0;
}

int cmd_weyl(const Common& c, int max_length, const std::string& parabolic, bool cells,
             const std::optional<std::string>& closure, long long max_elements, std::ostream& out) {
  require_format(c, {"text", "json"}, "weyl");
  if (cells && closure) throw Error(ErrorCode::Usage, "--cells and --closure are exclusive");
  if (max_length < 0) throw Error(ErrorCode::Usage, "--max-length must be non-negative");
  if (max_elements < 1) throw Error(ErrorCode::Usage, "--max-elements must be positive");
  const auto m = load(c).m;
  const WeylGroup w(m);
  const auto j = make_index_set(parse_list(parabolic, m.rank(), "--parabolic"), m.rank());
  const auto cap = static_cast<std::size_t>(max_elements);
  const bool json = c.format == "json";
  ojson o;
  o["J"] = one_based(j);
  o["max_length"] = max_length;

  const auto list = [&](const std::vector<WeylElement>& elems, const char* key) {
    if (json) {
      auto arr = ojson::array();
      for (const auto& e : elems) arr.push_back({{"length", e.length()}, {"word", one_based(w.reduced_word(e))}});
      o[key] = arr;
    } else {
      for (const auto& e : elems) out << e.length() << "  " << word_text(w.reduced_word(e)) << '\n';
    }
  };

  if (cells) {
    const auto hist = w.cell_counts(j, max_length, cap);
    if (json) {
      ojson h = ojson::object();
      for (const auto& [len, n] : hist) h[std::to_string(len)] = n;
      o["cells"] = h;
    } else {
      out << "cells of G/P_J, J = " << index_set_key(j) << ", dimension <= " << max_length << ":\n";
      for (const auto& [len, n] : hist) out << "  dim " << len << ": " << n << '\n';
    }
  } else if (closure) {
    Word word;
    for (int i : parse_list(*closure, m.rank(), "--closure")) word.push_back(i);
    const auto e = w.element(word);
    const auto cl = w.closure_cells(e, j, cap);
    if (json) {
      o["w"] = one_based(w.reduced_word(e));
    } else {
      out << "closure of the cell of w = " << word_text(w.reduced_word(e)) << " in G/P_J, J = " << index_set_key(j)
          << ": " << cl.size() << " cells\n";
    }
    list(cl, "closure");
  } else {
    const auto reps = w.minimal_reps(j, max_length, cap);
    if (!json)
      out << "W^J for J = " << index_set_key(j) << " up to length " << max_length << ": " << reps.size()
          << " elements\n";
    list(reps, "elements");
  }
  if (json) out << o.dump(2) << '\n';
  return 0;
}

int cmd_adm(const Common& c, bool dot, std::ostream& out) {
  const std::string format = dot ? "dot" : c.format;
  const auto m = load(c).m;
  const AdmGraph g(m);
  if (format == "dot") {
    out << to_dot(g);
    return 0;
  }
  const auto cc = counts(g);
  if (format == "json") {
    ojson o;
    auto comps = ojson::array();
    for (const auto& comp : g.components())
      comps.push_back({{"vertices", one_based(comp.vertices)}, {"colour", colour_name(comp.colour)}});
    o["components"] = comps;
    auto edges = ojson::array();
    for (const auto& [a, b] : g.edges()) edges.push_back({a + 1, b + 1});
    o["edges"] = edges;
    o["counts"] = {{"n_r", cc.n_r}, {"n_g", cc.n_g}, {"n_b", cc.n_b}};
    out << o.dump(2) << '\n';
    return 0;
  }
  out << "components:\n";
  for (const auto& comp : g.components())
    out << "  " << index_set_key(comp.vertices) << ' ' << colour_name(comp.colour) << '\n';
  out << "edges:";
  if (g.edges().empty()) out << " none";
  for (const auto& [a, b] : g.edges()) out << ' ' << a + 1 << '-' << b + 1;
  out << "\ncounts: red " << cc.n_r << ", green " << cc.n_g << ", blue " << cc.n_b << '\n';
  return 0;
}

int cmd_verify(const Common& c, std::size_t cap, std::ostream& out) {
  require_format(c, {"text", "json"}, "verify");
  const auto m = load(c).m;
  const AdmGraph g(m);
  VerificationReport all;
  for (const auto& comp : g.components()) {
    auto r = verify_component(m, comp.vertices, comp.colour, cap);
    all.checks.insert(all.checks.end(), r.checks.begin(), r.checks.end());
  }

  // product law: pi1(G/B) against the component factors
  const auto flag = flag_presentation(m, {});
  const auto flag_ab = abelianization(flag);
  AbelianInvariants sum;
  std::optional<std::int64_t> product = 1;
  std::vector<std::int64_t> torsion;
  for (const auto& comp : g.components()) {
    const auto p = component_presentation(m, comp.vertices);
    const auto ab = abelianization(p);
    sum.free_rank += ab.free_rank;
    torsion.insert(torsion.end(), ab.torsion.begin(), ab.torsion.end());
    if (product) {
      const auto e = ab.free_rank > 0 ? std::nullopt : std::optional(todd_coxeter(p, {}, cap));
      if (e && e->is_finite())
        product = *product * e->value;
      else
        product.reset();
    }
  }
  // direct sum of the factors, renormalised through Smith form
  IntMatrix diag;
  for (std::size_t k = 0; k < torsion.size(); ++k) {
    std::vector<std::int64_t> row(torsion.size(), 0);
    row[k] = torsion[k];
    diag.push_back(std::move(row));
  }
  for (auto d : smith_diagonal(diag))
    if (d > 1) sum.torsion.push_back(d);
  all.checks.push_back({"product law abelianization", flag_ab == sum ? CheckStatus::Pass : CheckStatus::Fail,
                        "pi1(G/B) " + to_string(flag_ab) + ", sum of factors " + to_string(sum)});
  if (product) {
    const auto e = todd_coxeter(flag, {}, cap);
    if (e.is_finite())
      all.checks.push_back({"product law order", e.value == *product ? CheckStatus::Pass : CheckStatus::Fail,
                            "pi1(G/B) order " + std::to_string(e.value) + ", product of factors " +
                                std::to_string(*product)});
    else
      all.checks.push_back({"product law order", CheckStatus::Inconclusive,
                            "coset cap " + std::to_string(e.value) + " reached"});
  }

  // the two relator sets agree for J = {} and every singleton
  const WeylGroup w(m);
  std::vector<IndexSet> sets{{}};
  for (int i = 0; i < m.rank(); ++i) sets.push_back({i});
  for (const auto& j : sets) {
    const auto a = abelianization(flag_presentation(m, j));
    const auto b = abelianization(cw_presentation(m, j, w));
    all.checks.push_back({"cw relators " + index_set_key(j), a == b ? CheckStatus::Pass : CheckStatus::Fail,
                          "flag " + to_string(a) + ", cells " + to_string(b)});
  }

  if (c.format == "json") {
    ojson o;
    auto arr = ojson::array();
    for (const auto& ch : all.checks)
      arr.push_back({{"check", ch.name}, {"status", check_status_name(ch.status)}, {"detail", ch.detail}});
    o["checks"] = arr;
    out << o.dump(2) << '\n';
  } else {
    for (const auto& ch : all.checks)
      out << check_status_name(ch.status) << ' ' << ch.name << ": " << ch.detail << '\n';
  }
  if (all.any(CheckStatus::Fail)) throw Error(ErrorCode::VerificationFailed, "verification failed");
  if (all.any(CheckStatus::Inconclusive))
    throw Error(ErrorCode::ResourceLimit, "some checks were inconclusive at coset cap " + std::to_string(cap));
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"kmfg: fundamental groups of split real Kac-Moody groups and their flag varieties", "kmfg"};
  app.require_subcommand(1);

  Common common;
  const auto add_common = [&](CLI::App* sc) {
    sc->add_option("--type", common.type, "named type, e.g. A3, E10, G2~");
    sc->add_option("--matrix", common.matrix, "matrix file (plain or JSON), '-' for stdin");
    sc->add_option("--format", common.format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
    sc->add_flag("--force", common.force, "compute even when the hypotheses fail");
  };

  std::optional<long long> max_cosets;
  const auto add_cap = [&](CLI::App* sc) {
    sc->add_option("--max-cosets", max_cosets, "coset cap (default 100000, env KMFG_MAX_COSETS)");
  };

  auto* info = app.add_subcommand("info", "hypotheses and diagram summary");
  add_common(info);
  auto* pi1 = app.add_subcommand("pi1", "fundamental groups of G and K");
  add_common(pi1);
  add_cap(pi1);

  auto* spin = app.add_subcommand("spin", "fundamental groups of the spin covers");
  add_common(spin);
  std::string kappa;
  bool all = false;
  spin->add_option("--kappa", kappa, "one of 1/2 per green or blue component, in component order");
  spin->add_flag("--all", all, "every admissible colouring (default)");

  auto* flag = app.add_subcommand("flag", "fundamental group of G/P_J");
  add_common(flag);
  add_cap(flag);
  std::string set;
  flag->add_option("--set", set, "J as a 1-based comma list; empty for G/B")->required();

  auto* weyl = app.add_subcommand("weyl", "Weyl group and Schubert cell queries");
  add_common(weyl);
  int max_length = 0;
  std::string parabolic;
  bool cells = false;
  std::optional<std::string> closure;
  long long max_elements = static_cast<long long>(kDefaultElementCap);
  weyl->add_option("--max-length", max_length, "length bound")->required();
  weyl->add_option("--parabolic", parabolic, "J as a 1-based comma list");
  weyl->add_flag("--cells", cells, "cell counts per dimension");
  weyl->add_option("--closure", closure, "cells in the closure of the cell of WORD (comma list)");
  weyl->add_option("--max-elements", max_elements, "element cap (default 1000000)");

  auto* adm = app.add_subcommand("adm", "the coloured parity graph");
  add_common(adm);
  bool dot = false;
  adm->add_flag("--dot", dot, "Graphviz output");

  auto* verify = app.add_subcommand("verify", "check the component-group and presentation lemmas");
  add_common(verify);
  add_cap(verify);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error[E101]: " << e.what() << '\n';
    return 1;
  }

  try {
    if (info->parsed()) return cmd_info(common, out);
    if (pi1->parsed()) return cmd_pi1(common, coset_cap(max_cosets), out, err);
    if (spin->parsed()) return cmd_spin(common, kappa, all, out);
    if (flag->parsed()) return cmd_flag(common, set, coset_cap(max_cosets), out);
    if (weyl->parsed()) return cmd_weyl(common, max_length, parabolic, cells, closure, max_elements, out);
    if (adm->parsed()) return cmd_adm(common, dot, out);
    if (verify->parsed()) return cmd_verify(common, coset_cap(max_cosets), out);
  } catch (const Error& e) {
    out.flush();
    err << "error[" << e.tag() << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::bad_alloc&) {
    err << "error[E401]: out of memory\n";
    return 4;
  }
  err << "error[E101]: no subcommand\n";
  return 1;
}

}  // namespace kmfg
