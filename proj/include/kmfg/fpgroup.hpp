#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kmfg/adm.hpp"
#include "kmfg/cartan.hpp"
#include "kmfg/coxeter.hpp"

namespace kmfg {

struct Letter {
  int gen;  // 0-based
  int exp;  // +1 or -1
  friend bool operator==(const Letter&, const Letter&) = default;
};

using FpWord = std::vector<Letter>;

FpWord free_reduce(const FpWord& w);
FpWord inverse(const FpWord& w);

/// Generators plus freely reduced relators. Immutable once built.
class FpPresentation {
 public:
  /// Throws InvalidPresentation on a bad index, exponent or duplicate name.
  FpPresentation(std::vector<std::string> names, std::vector<FpWord> relators);

  /// Generators named x1..xn.
  static FpPresentation numbered(int count, std::vector<FpWord> relators);

  int generator_count() const noexcept { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& generator_names() const noexcept { return names_; }
  const std::vector<FpWord>& relators() const noexcept { return relators_; }

 private:
  std::vector<std::string> names_;
  std::vector<FpWord> relators_;
};

/// `<x1,x2 | x1*x2^-1*x1^-1*x2^-1, x2^2>`
std::string to_text(const FpPresentation& p);
/// {"generators": [...], "relators": [[[gen, exp], ...], ...]}, gen 1-based.
std::string to_json_text(const FpPresentation& p);
/// Text or JSON form; JSON when the first non-blank character is '{'.
FpPresentation parse_presentation(std::string_view text);

struct AbelianInvariants {
  int free_rank = 0;
  std::vector<std::int64_t> torsion;  // each >= 2, d1 | d2 | ...

  /// Order of the group, nullopt when infinite. Throws Overflow if huge.
  std::optional<std::int64_t> order() const;
  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

/// "Z^2 x C2 x C4", "1" when trivial.
std::string to_string(const AbelianInvariants& a);

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Nonzero invariant factors of an integer matrix, d1 | d2 | ..., all
/// positive. Rows may be ragged only if empty.
std::vector<std::int64_t> smith_diagonal(IntMatrix a);

AbelianInvariants abelianization(const FpPresentation& p);

struct EnumerationResult {
  enum class Status { Finite, Exhausted };
  Status status;
  std::int64_t value;  // index if Finite, the cap if Exhausted

  static EnumerationResult finite(std::int64_t index) { return {Status::Finite, index}; }
  static EnumerationResult exhausted(std::int64_t cap) { return {Status::Exhausted, cap}; }
  bool is_finite() const noexcept { return status == Status::Finite; }
  friend bool operator==(const EnumerationResult&, const EnumerationResult&) = default;
};

enum class Strategy { HltLookahead, Felsch };

inline constexpr std::size_t kDefaultCosetCap = 100'000;

/// Index of the subgroup generated by `subgroup` (trivial subgroup when
/// empty). The cap bounds the number of live cosets at any time.
EnumerationResult todd_coxeter(const FpPresentation& p, const std::vector<FpWord>& subgroup = {},
                               std::size_t max_cosets = kDefaultCosetCap, Strategy strategy = Strategy::HltLookahead);

/// x_i x_j^eps(i,j) x_i^-1 x_j^-1
FpWord commutation_relator(const CartanMatrix& m, int i, int j, int gi, int gj);

/// Generators x_i, i in J (in order); relators for ordered pairs in J only.
FpPresentation h_j_presentation(const CartanMatrix& m, const IndexSet& j);

/// The factor of pi1(G/B) attached to the Pi^adm component J: the full
/// flag presentation with x_k killed for k outside J. After eliminating the
/// killed generators this is the H_J presentation plus x_i^2 for every i in
/// J that has a j outside J with eps(j,i) = -1. Equals h_j_presentation
/// for green and blue components.
FpPresentation component_presentation(const CartanMatrix& m, const IndexSet& j);

/// Generators x_1..x_n, commutation relators for every ordered pair, x_k for k in J.
FpPresentation flag_presentation(const CartanMatrix& m, const IndexSet& j);

/// As flag_presentation but only pairs (i,j) with s_i s_j in W^J of length 2.
FpPresentation cw_presentation(const CartanMatrix& m, const IndexSet& j, const WeylGroup& w);

struct ComponentGroupDescriptor {
  Colour colour;
  int size;
  bool infinite_cyclic = false;
  std::optional<std::int64_t> order;
  // only stated for red components
  std::optional<AbelianInvariants> abelian;
};

/// r: abelian of order 2^size; g: Z (size must be 1); b: order 2^(size+1).
/// Throws InvalidPresentation for size < 1 or a green component with size > 1.
ComponentGroupDescriptor classify_component_group(Colour colour, int size);

enum class CheckStatus { Pass, Fail, Inconclusive };
const char* check_status_name(CheckStatus s) noexcept;

struct Check {
  std::string name;
  CheckStatus status;
  std::string detail;
};

struct VerificationReport {
  std::vector<Check> checks;
  bool any(CheckStatus s) const;
};

VerificationReport verify_component(const CartanMatrix& m, const IndexSet& j, Colour colour,
                                    std::size_t max_cosets = kDefaultCosetCap);

}  // namespace kmfg
