#include "kmfg/adm.hpp"

#include <algorithm>
#include <sstream>

namespace kmfg {

char colour_letter(Colour c) noexcept {
  switch (c) {
    case Colour::Red: return 'r';
    case Colour::Green: return 'g';
    case Colour::Blue: return 'b';
  }
  return '?';
}

const char* colour_name(Colour c) noexcept {
  switch (c) {
    case Colour::Red: return "red";
    case Colour::Green: return "green";
    case Colour::Blue: return "blue";
  }
  return "?";
}

AdmGraph::AdmGraph(const CartanMatrix& m) : component_of_(static_cast<std::size_t>(m.rank()), -1) {
  const int n = m.rank();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (parity(m, i, j).odd() && parity(m, j, i).odd()) {
        edges_.emplace_back(i, j);
        adj[static_cast<std::size_t>(i)].push_back(j);
        adj[static_cast<std::size_t>(j)].push_back(i);
      }

  // a vertex witnesses red if some j has eps(i,j) = 1 and eps(j,i) = -1
  auto red_witness = [&](int i) {
    for (int j = 0; j < n; ++j)
      if (j != i && !parity(m, i, j).odd() && parity(m, j, i).odd()) return true;
    return false;
  };

  for (int s = 0; s < n; ++s) {
    if (component_of_[static_cast<std::size_t>(s)] >= 0) continue;
    const int id = static_cast<int>(components_.size());
    std::vector<int> verts{s};
    component_of_[static_cast<std::size_t>(s)] = id;
    for (std::size_t k = 0; k < verts.size(); ++k)
      for (int j : adj[static_cast<std::size_t>(verts[k])])
        if (component_of_[static_cast<std::size_t>(j)] < 0) {
          component_of_[static_cast<std::size_t>(j)] = id;
          verts.push_back(j);
        }
    std::sort(verts.begin(), verts.end());
    Colour colour = verts.size() == 1 ? Colour::Green : Colour::Blue;
    if (std::any_of(verts.begin(), verts.end(), red_witness)) colour = Colour::Red;
    components_.push_back({std::move(verts), colour});
  }
}

std::vector<int> AdmGraph::free_components() const {
  std::vector<int> out;
  for (std::size_t c = 0; c < components_.size(); ++c)
    if (components_[c].colour != Colour::Red) out.push_back(static_cast<int>(c));
  return out;
}

KappaColouring::KappaColouring(const AdmGraph& g, std::vector<int> per_component)
    : values_(std::move(per_component)) {
  if (values_.size() != g.components().size())
    throw Error(ErrorCode::InadmissibleKappa, "colouring has " + std::to_string(values_.size()) +
                                                  " values but the graph has " +
                                                  std::to_string(g.components().size()) + " components");
  for (std::size_t c = 0; c < values_.size(); ++c) {
    if (values_[c] != 1 && values_[c] != 2)
      throw Error(ErrorCode::InadmissibleKappa, "colouring values must be 1 or 2");
    if (g.components()[c].colour == Colour::Red && values_[c] != 1)
      throw Error(ErrorCode::InadmissibleKappa,
                  "inadmissible colouring: red component containing vertex " +
                      std::to_string(g.components()[c].vertices.front() + 1) + " must have value 1");
  }
}

KappaColouring KappaColouring::from_bits(const AdmGraph& g, const std::string& bits) {
  const auto free = g.free_components();
  if (bits.size() != free.size())
    throw Error(ErrorCode::InadmissibleKappa, "expected " + std::to_string(free.size()) +
                                                  " colouring characters (one per green/blue component), got " +
                                                  std::to_string(bits.size()));
  std::vector<int> values(g.components().size(), 1);
  for (std::size_t t = 0; t < bits.size(); ++t) {
    if (bits[t] != '1' && bits[t] != '2')
      throw Error(ErrorCode::InadmissibleKappa, "colouring characters must be '1' or '2'");
    values[static_cast<std::size_t>(free[t])] = bits[t] - '0';
  }
  return KappaColouring(g, std::move(values));
}

KappaColouring KappaColouring::constant(const AdmGraph& g, int value_on_free) {
  std::vector<int> values(g.components().size(), 1);
  for (int c : g.free_components()) values[static_cast<std::size_t>(c)] = value_on_free;
  return KappaColouring(g, std::move(values));
}

std::string KappaColouring::bits(const AdmGraph& g) const {
  std::string out;
  for (int c : g.free_components()) out.push_back(static_cast<char>('0' + values_[static_cast<std::size_t>(c)]));
  return out;
}

std::vector<KappaColouring> enumerate_kappa(const AdmGraph& g) {
  const auto free = g.free_components();
  if (free.size() > 24) throw Error(ErrorCode::ResourceLimit, "too many free components to enumerate colourings");
  std::vector<KappaColouring> out;
  const std::size_t total = std::size_t{1} << free.size();
  out.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<int> values(g.components().size(), 1);
    for (std::size_t t = 0; t < free.size(); ++t)
      if (k >> t & 1U) values[static_cast<std::size_t>(free[t])] = 2;
    out.emplace_back(g, std::move(values));
  }
  return out;
}

ColourCounts counts(const AdmGraph& g, const std::optional<KappaColouring>& kappa) {
  ColourCounts out;
  for (const auto& comp : g.components()) {
    switch (comp.colour) {
      case Colour::Red: ++out.n_r; break;
      case Colour::Green: ++out.n_g; break;
      case Colour::Blue: ++out.n_b; break;
    }
  }
  if (kappa) {
    // re-validate against this graph
    const KappaColouring k(g, kappa->values());
    int blue1 = 0, twos = 0;
    for (std::size_t c = 0; c < g.components().size(); ++c) {
      if (k.values()[c] == 2) ++twos;
      if (k.values()[c] == 1 && g.components()[c].colour == Colour::Blue) ++blue1;
    }
    out.n_b_kappa1 = blue1;
    out.c = twos;
  }
  return out;
}

std::string to_dot(const AdmGraph& g) {
  std::ostringstream out;
  out << "graph adm {\n";
  out << "  node [shape=circle, style=filled, fontcolor=white];\n";
  for (int v = 0; v < g.vertex_count(); ++v)
    out << "  " << v + 1 << " [fillcolor=" << colour_name(g.colour_of(v)) << ", label=\"" << v + 1 << "\"];\n";
  for (const auto& [i, j] : g.edges()) out << "  " << i + 1 << " -- " << j + 1 << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace kmfg
