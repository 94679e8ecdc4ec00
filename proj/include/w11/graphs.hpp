#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "w11/specht.hpp"

namespace w11::graphs {

/// Genus-labeled graph with labeled legs. Edge e has half-edges 2e (side 0)
/// and 2e+1 (side 1); edges[e][s] is the vertex of side s.
struct StableGraph {
  std::vector<int> genera;
  std::vector<int> leg_vertex;  // leg k lives at leg_vertex[k-1]
  std::vector<std::array<int, 2>> edges;

  int num_vertices() const { return static_cast<int>(genera.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_legs() const { return static_cast<int>(leg_vertex.size()); }
  int half_edge_vertex(int h) const { return edges.at(h / 2)[h % 2]; }
  bool is_loop(int e) const { return edges.at(e)[0] == edges.at(e)[1]; }
  /// Legs plus incident half-edges.
  int valence(int v) const;
  int betti_number() const;
  int genus() const;
  bool is_connected() const;
  bool is_stable() const;
  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
  /// Sorted marks at v: its legs, then its half-edges as node marks.
  specht::Alphabet marks_at(int v) const;
  /// Vertex carrying a mark.
  int vertex_of(const specht::Mark& mark) const;

  friend bool operator==(const StableGraph&, const StableGraph&) = default;
};

/// vertex_map[v] and half_edge_map[h] give images; legs are fixed.
struct GraphIso {
  std::vector<int> vertex_map;
  std::vector<int> half_edge_map;

  static GraphIso identity(const StableGraph& g);
  /// (this ∘ other).
  GraphIso compose(const GraphIso& other) const;
  GraphIso inverse() const;
  specht::Mark map_mark(const specht::Mark& m) const;
  friend bool operator==(const GraphIso&, const GraphIso&) = default;
};

/// True if iso maps a onto b respecting genera, legs and the edge pairing.
bool is_isomorphism(const StableGraph& a, const StableGraph& b, const GraphIso& iso);

struct Canonical {
  StableGraph graph;  // canonical representative
  GraphIso iso;       // input -> representative
  std::string key;
};

/// Canonical representative: vertices ordered by a refinement-invariant
/// color, ties broken by exhaustive minimization of the encoding; edges
/// sorted by endpoint pair with side 0 at the smaller vertex.
Canonical canonicalize(const StableGraph& g);
std::string canonical_key(const StableGraph& g);

struct Contraction {
  StableGraph graph;
  std::vector<int> vertex_map;     // old vertex -> new vertex
  std::vector<int> half_edge_map;  // old half-edge -> new half-edge, -1 for the contracted edge
};

/// Loop: the vertex gains one genus. Otherwise the side-1 endpoint merges
/// into the side-0 endpoint. Remaining edges keep their relative order.
Contraction contract_edge(const StableGraph& g, int e);

/// Full leg-fixing automorphism group, identity first. Throws for graphs
/// with more than two edges.
std::vector<GraphIso> automorphisms(const StableGraph& g);
/// Sign of the permutation induced on edges.
int det_edge_character(const StableGraph& g, const GraphIso& iso);

/// Returns (genera, valences) -> keep?; consulted per vertex-count profile
/// before legs are distributed.
using ProfileFilter = std::function<bool(const std::vector<int>& genera, const std::vector<int>& valences)>;

/// All classes, sorted by canonical key. Throws if (g, n) is unstable.
std::vector<StableGraph> enumerate_one_edge(int g, int n, const ProfileFilter& keep = {});
std::vector<StableGraph> enumerate_two_edge(int g, int n, const ProfileFilter& keep = {});
/// Genus-0 trees with n legs and any number of edges.
std::vector<StableGraph> enumerate_stable_trees(int n);

/// Inverse of contraction: the marks in `moved` (legs and half-edges at v)
/// move to a new vertex of genus `moved_genus`, joined to v by a new last
/// edge with side 0 at v. v keeps genus g_v - moved_genus.
StableGraph split_vertex(const StableGraph& g, int v, const std::vector<specht::Mark>& moved, int moved_genus);
/// Attach a new last edge as a loop at v, lowering its genus by one.
StableGraph add_loop(const StableGraph& g, int v);

}  // namespace w11::graphs
