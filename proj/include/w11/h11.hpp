#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "w11/graphs.hpp"
#include "w11/ledger.hpp"
#include "w11/ratlin.hpp"
#include "w11/specht.hpp"

namespace w11::h11 {

class NotInSpan : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 0 for genus 0, binom(m-1, 10) for genus 1, and for genus >= 2 the ledger
/// value (UnknownStatus if unresolved).
std::uint64_t vertex_h11_dim(int gv, int m, const VanishingLedger& ledger);

/// Profile filter for graph enumeration: keeps vertex profiles with a
/// nonzero H^11 summand, consulting (and so validating) the ledger for every
/// genus >= 2 vertex it sees.
graphs::ProfileFilter nonzero_profile(const VanishingLedger& ledger);

struct VertexSummand {
  int vertex = 0;
  specht::Alphabet alphabet;
  std::size_t offset = 0;
  std::size_t dim = 0;
};

/// Kunneth basis: standard generators of each genus-1 vertex with at least
/// 11 marks, concatenated in vertex order. Genus >= 2 vertices contribute
/// nothing once the ledger says they vanish.
struct GraphH11Basis {
  graphs::StableGraph graph;
  std::vector<VertexSummand> summands;
  std::size_t total_dim = 0;

  const VertexSummand* summand_at(int vertex) const;
  /// "<key>#v<i>#<generator tuple>".
  std::string label(const std::string& key, std::size_t index) const;
};

GraphH11Basis graph_basis(const graphs::StableGraph& g, const VanishingLedger& ledger);

/// Boundary pullback on standard generators: those with |A ∩ B| >= 10 map
/// to omega(eps(A)) over B ∪ {p}; others to zero. Extended linearly through
/// express_in_generators. B lists marks of v.alphabet; p must be new.
specht::H11Vector res(const specht::H11Vector& v, const std::vector<specht::Mark>& b, const specht::Mark& p);
/// The coordinatewise formula, e_C -> e_C (C ⊆ B), ±e_{C-i+p} (C\B = {i}),
/// 0 otherwise. Must agree with res on the span.
specht::H11Vector res_coordinatewise(const specht::H11Vector& v, const std::vector<specht::Mark>& b,
                                     const specht::Mark& p);

/// Pulls generator `index` of a source alphabet back along a mark map.
/// image[i] is the target position of source mark i, or -1 if it leaves the
/// genus-1 side; p_pos replaces a single departing mark (-1: none allowed).
/// Appends (target generator index, ±1).
void pull_generator(std::size_t index, const std::vector<int>& image, int p_pos,
                    std::vector<std::pair<std::size_t, int>>& out);

/// Source -> target description of xi_e^* in Kunneth coordinates.
struct PullbackPlan {
  struct Block {
    std::size_t source_offset = 0, source_dim = 0;
    std::optional<std::size_t> target_offset;  // nullopt: zero block
    std::vector<int> image;
    int p_pos = -1;
    enum class Kind { Relabel, Restrict, LoopZero } kind = Kind::Relabel;
  };
  std::vector<Block> blocks;
  std::size_t source_dim = 0, target_dim = 0;

  /// Image of a source coordinate as (target index, ±1) terms.
  void apply(std::size_t source_index, std::vector<std::pair<std::size_t, int>>& out) const;
  ratlin::SparseVec apply(const ratlin::SparseVec& v) const;
};

/// Plan for xi_e^*: H^11(source) -> H^11(gamma2), where source is
/// isomorphic to the contraction of e via `contracted_to_source`.
PullbackPlan plan_pullback(const graphs::StableGraph& gamma2, const GraphH11Basis& target, int e,
                           const GraphH11Basis& source, const graphs::GraphIso& contracted_to_source);

/// Matrix of xi_e^* from graph_basis(contract_edge(gamma2, e)) to
/// graph_basis(gamma2).
ratlin::SparseMat contraction_pullback(const graphs::StableGraph& gamma2, int e, const VanishingLedger& ledger);

/// Aut(gamma) acting on the Kunneth basis, optionally twisted by det E.
ratlin::SignedAction automorphism_action(const GraphH11Basis& basis, bool twist_by_det);

struct TwistedInvariants {
  GraphH11Basis basis;
  ratlin::InvariantBasis invariants;
  std::size_t automorphism_count = 1;
};

/// (H^11(M_gamma) ⊗ det E)^Aut in Kunneth generator coordinates.
TwistedInvariants twisted_invariants(const graphs::StableGraph& g, const VanishingLedger& ledger);

}  // namespace w11::h11
