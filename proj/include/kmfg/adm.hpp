#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kmfg/cartan.hpp"

namespace kmfg {

enum class Colour { Red, Green, Blue };

char colour_letter(Colour c) noexcept;        // 'r', 'g', 'b'
const char* colour_name(Colour c) noexcept;   // "red", "green", "blue"

struct AdmComponent {
  std::vector<int> vertices;  // sorted, 0-based
  Colour colour;
};

/// Parity graph: vertices are the matrix indices, {i,j} is an edge iff
/// both parities eps(i,j) and eps(j,i) are -1. Components are ordered by
/// smallest vertex and carry their colour.
class AdmGraph {
 public:
  explicit AdmGraph(const CartanMatrix& m);

  int vertex_count() const noexcept { return static_cast<int>(component_of_.size()); }
  const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
  const std::vector<AdmComponent>& components() const noexcept { return components_; }
  int component_of(int vertex) const { return component_of_.at(static_cast<std::size_t>(vertex)); }
  Colour colour_of(int vertex) const { return components_[static_cast<std::size_t>(component_of(vertex))].colour; }

  /// Components not forced to kappa = 1 (green and blue), in component order.
  std::vector<int> free_components() const;

 private:
  std::vector<std::pair<int, int>> edges_;  // i < j, lexicographic
  std::vector<AdmComponent> components_;
  std::vector<int> component_of_;
};

inline AdmGraph build_adm(const CartanMatrix& m) { return AdmGraph(m); }

/// Admissible colouring, stored per component with values 1 or 2.
class KappaColouring {
 public:
  /// Throws InadmissibleKappa if sizes mismatch, a value is not 1/2, or a
  /// red component is not 1.
  KappaColouring(const AdmGraph& g, std::vector<int> per_component);

  /// One character per free component ('1' or '2'), in component order.
  static KappaColouring from_bits(const AdmGraph& g, const std::string& bits);
  static KappaColouring constant(const AdmGraph& g, int value_on_free);

  const std::vector<int>& values() const noexcept { return values_; }
  int value_of_component(int c) const { return values_.at(static_cast<std::size_t>(c)); }
  std::string bits(const AdmGraph& g) const;

  friend bool operator==(const KappaColouring&, const KappaColouring&) = default;

 private:
  std::vector<int> values_;
};

/// All 2^f admissible colourings, f = number of free components. Entry k
/// sets free component t (in component order) to 2 iff bit t of k is set.
std::vector<KappaColouring> enumerate_kappa(const AdmGraph& g);

struct ColourCounts {
  int n_r = 0, n_g = 0, n_b = 0;
  // only filled when a colouring is supplied
  std::optional<int> n_b_kappa1;
  std::optional<int> c;
};

ColourCounts counts(const AdmGraph& g, const std::optional<KappaColouring>& kappa = std::nullopt);

/// Graphviz rendering; node labels are 1-based indices.
std::string to_dot(const AdmGraph& g);

}  // namespace kmfg
