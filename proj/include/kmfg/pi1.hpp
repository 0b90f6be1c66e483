#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kmfg/adm.hpp"
#include "kmfg/cartan.hpp"
#include "kmfg/fpgroup.hpp"

namespace kmfg {

/// Z^free_rank x C2^c2_count
struct Pi1Type {
  int free_rank = 0;
  int c2_count = 0;
  friend bool operator==(const Pi1Type&, const Pi1Type&) = default;
};

/// "Z^2 x C2", "Z", "C2^3", "1".
std::string to_string(const Pi1Type& t);

struct GateOptions {
  bool force = false;
};

/// Throws HypothesisRefused unless the matrix is symmetrizable or
/// two-spherical (or force is set).
void check_gate(const CartanMatrix& m, GateOptions opts = {});

/// Throws Reducible for a disconnected diagram, HypothesisRefused per check_gate.
Pi1Type pi1_group(const CartanMatrix& m, GateOptions opts = {});

struct CompactResult {
  Pi1Type value;
  // set when the matrix is not symmetrizable: the K -> G equivalence is
  // only known in the symmetrizable case
  bool caveat = false;
};

CompactResult pi1_maximal_compact(const CartanMatrix& m, GateOptions opts = {});

Pi1Type pi1_spin(const CartanMatrix& m, const KappaColouring& kappa, GateOptions opts = {});

struct FlagEntry {
  IndexSet j;
  FpPresentation presentation;
  AbelianInvariants invariants;
  // nullopt when the abelianization already has free rank and enumeration was skipped
  std::optional<EnumerationResult> enumeration;
  // irreducible simply-laced with J nonempty: C2^(n-|J|), checked against the two above
  std::optional<Pi1Type> closed_form;

  bool infinite() const { return invariants.free_rank > 0; }
  bool abelian() const;
};

/// Description of pi1(G/P_J) for text output.
std::string describe(const FlagEntry& f);

/// Throws VerificationFailed if the closed form disagrees with the engine.
FlagEntry pi1_flag(const CartanMatrix& m, const IndexSet& j, std::size_t max_cosets = kDefaultCosetCap,
                   GateOptions opts = {});

/// 2^(n - |J|); Throws Overflow above 2^62.
std::int64_t covering_degree(int n, const IndexSet& j);

/// Contribution of one Pi^adm component: 1 (r), Z (g), C2 (b).
Pi1Type contribution(Colour c);

struct ComponentRow {
  std::vector<int> vertices;
  Colour colour;
  Pi1Type contribution;
};

struct SpinRow {
  std::string kappa;  // one character per free component
  Pi1Type value;
};

struct ReportOptions {
  std::size_t max_cosets = kDefaultCosetCap;
  bool force = false;
  bool include_spin = true;
  bool include_flags = true;
};

struct Pi1Report {
  HypothesisReport hypotheses;
  bool simply_laced = false;
  std::vector<std::string> notes;
  std::vector<ComponentRow> components;
  Pi1Type pi1_g;
  Pi1Type pi1_k;
  bool k_caveat = false;
  std::vector<SpinRow> spin;
  std::vector<FlagEntry> flags;  // J = {} first, then every singleton
};

/// Reducible input is computed on the whole diagram (the product of the
/// factors) and carries a note; the gate is applied to each factor.
Pi1Report full_report(const CartanMatrix& m, const ReportOptions& opts = {});

std::string render_text(const Pi1Report& r);
std::string render_json(const Pi1Report& r);

}  // namespace kmfg
