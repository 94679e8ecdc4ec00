#include "w11/h11.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace w11::h11 {

using graphs::StableGraph;
using specht::Mark;

std::uint64_t vertex_h11_dim(int gv, int m, const VanishingLedger& ledger) {
  if (gv < 0 || m < 0 || 2 * gv - 2 + m <= 0) throw std::invalid_argument("unstable vertex profile");
  if (gv == 0) return 0;
  if (gv == 1) return specht::generator_count(m);
  auto s = ledger.status(gv, m);
  switch (s.kind) {
    case VanishingStatus::Kind::Vanishes: return 0;
    case VanishingStatus::Kind::Nonzero:
      throw std::logic_error("nonvanishing H^11 in genus >= 2 has no model in this engine");
    case VanishingStatus::Kind::Unknown: break;
  }
  throw UnknownStatus(gv, m);
}

graphs::ProfileFilter nonzero_profile(const VanishingLedger& ledger) {
  return [&ledger](const std::vector<int>& genera, const std::vector<int>& valences) {
    bool any = false;
    for (std::size_t v = 0; v < genera.size(); ++v) {
      if (vertex_h11_dim(genera[v], valences[v], ledger) > 0) any = true;
    }
    return any;
  };
}

const VertexSummand* GraphH11Basis::summand_at(int vertex) const {
  for (const auto& s : summands) {
    if (s.vertex == vertex) return &s;
  }
  return nullptr;
}

std::string GraphH11Basis::label(const std::string& key, std::size_t index) const {
  for (const auto& s : summands) {
    if (index >= s.offset && index < s.offset + s.dim) {
      return key + "#v" + std::to_string(s.vertex) + "#" +
             specht::subset_key(s.alphabet, specht::generator_mask(index - s.offset));
    }
  }
  throw std::out_of_range("basis index out of range");
}

GraphH11Basis graph_basis(const StableGraph& g, const VanishingLedger& ledger) {
  GraphH11Basis out;
  out.graph = g;
  for (int v = 0; v < g.num_vertices(); ++v) {
    std::uint64_t d = vertex_h11_dim(g.genera[v], g.valence(v), ledger);
    if (d == 0) continue;
    if (g.genera[v] != 1) throw std::logic_error("nonzero H^11 summand at a vertex of genus != 1");
    out.summands.push_back({v, g.marks_at(v), out.total_dim, static_cast<std::size_t>(d)});
    out.total_dim += d;
  }
  return out;
}

void pull_generator(std::size_t index, const std::vector<int>& image, int p_pos,
                    std::vector<std::pair<std::size_t, int>>& out) {
  specht::Mask g = specht::generator_mask(index);
  int tuple[11];
  int missing = -1;
  int j = 0;
  for (int pos = 0; pos < static_cast<int>(image.size()) && j < 11; ++pos) {
    if (!(g >> pos & 1u)) continue;
    tuple[j] = image[pos];
    if (tuple[j] < 0) {
      if (missing >= 0) return;  // two marks leave the genus-1 side
      missing = j;
    }
    ++j;
  }
  if (j != 11) throw std::logic_error("generator outside the source alphabet");
  if (missing >= 0) {
    if (p_pos < 0) throw std::logic_error("mark leaves a relabeled vertex");
    tuple[missing] = p_pos;
  }
  specht::omega_in_generators(tuple, out);
}

namespace {

struct Target {
  specht::Alphabet alphabet;
  std::vector<int> image;
  int p_pos = -1;
};

Target restriction_target(const specht::Alphabet& source, const std::vector<Mark>& b, const Mark& p) {
  Target t;
  for (const auto& m : b) {
    if (!std::binary_search(source.begin(), source.end(), m)) {
      throw std::invalid_argument("restriction set is not inside the alphabet");
    }
  }
  if (std::binary_search(source.begin(), source.end(), p)) throw std::invalid_argument("node mark is not new");
  t.alphabet = b;
  t.alphabet.push_back(p);
  std::sort(t.alphabet.begin(), t.alphabet.end());
  if (std::adjacent_find(t.alphabet.begin(), t.alphabet.end()) != t.alphabet.end()) {
    throw std::invalid_argument("restriction set has repeated marks");
  }
  specht::validate_alphabet(t.alphabet);
  for (const auto& m : source) {
    t.image.push_back(std::binary_search(b.begin(), b.end(), m) || std::find(b.begin(), b.end(), m) != b.end()
                          ? specht::position(t.alphabet, m)
                          : -1);
  }
  t.p_pos = specht::position(t.alphabet, p);
  return t;
}

}  // namespace

specht::H11Vector res(const specht::H11Vector& v, const std::vector<Mark>& b, const Mark& p) {
  Target t = restriction_target(v.alphabet, b, p);
  auto coeffs = specht::express_in_generators(v);
  if (!coeffs) throw NotInSpan("vector is not in the span of the omega classes");
  specht::H11Vector out{t.alphabet, {}};
  const int m = static_cast<int>(t.alphabet.size());
  if (m < 11) return out;
  ratlin::Vector image(specht::generator_count(m), Rational(0));
  std::vector<std::pair<std::size_t, int>> terms;
  for (std::size_t i = 0; i < coeffs->size(); ++i) {
    if ((*coeffs)[i] == 0) continue;
    terms.clear();
    pull_generator(i, t.image, t.p_pos, terms);
    for (auto [k, s] : terms) image[k] += s * (*coeffs)[i];
  }
  return specht::expand_generators(t.alphabet, image);
}

specht::H11Vector res_coordinatewise(const specht::H11Vector& v, const std::vector<Mark>& b, const Mark& p) {
  Target t = restriction_target(v.alphabet, b, p);
  specht::H11Vector out{t.alphabet, {}};
  std::vector<int> pos;
  for (const auto& [mask, val] : v.coeffs) {
    pos.clear();
    int outside = 0;
    for (std::size_t i = 0; i < v.alphabet.size(); ++i) {
      if (!(mask >> i & 1u)) continue;
      if (t.image[i] < 0) {
        ++outside;
        pos.push_back(t.p_pos);
      } else {
        pos.push_back(t.image[i]);
      }
    }
    if (outside > 1) continue;
    int s = specht::sort_sign(pos);
    specht::Mask to = 0;
    for (int q : pos) to |= specht::Mask{1} << q;
    out.add(to, s > 0 ? val : Rational(-val));
  }
  return out;
}

// ---------------------------------------------------------------------------

void PullbackPlan::apply(std::size_t source_index, std::vector<std::pair<std::size_t, int>>& out) const {
  for (const auto& b : blocks) {
    if (source_index < b.source_offset || source_index >= b.source_offset + b.source_dim) continue;
    if (!b.target_offset) return;
    std::size_t start = out.size();
    pull_generator(source_index - b.source_offset, b.image, b.p_pos, out);
    for (std::size_t k = start; k < out.size(); ++k) out[k].first += *b.target_offset;
    return;
  }
  throw std::out_of_range("source index outside the pullback plan");
}

ratlin::SparseVec PullbackPlan::apply(const ratlin::SparseVec& v) const {
  std::map<std::size_t, Rational> acc;
  std::vector<std::pair<std::size_t, int>> terms;
  for (const auto& [i, c] : v) {
    terms.clear();
    apply(i, terms);
    for (auto [k, s] : terms) acc[k] += s * c;
  }
  ratlin::SparseVec out;
  for (auto& [k, c] : acc) {
    if (c != 0) out.emplace_back(k, std::move(c));
  }
  return out;
}

PullbackPlan plan_pullback(const StableGraph& gamma2, const GraphH11Basis& target, int e,
                           const GraphH11Basis& source, const graphs::GraphIso& contracted_to_source) {
  auto contraction = graphs::contract_edge(gamma2, e);
  graphs::GraphIso to_phi = contracted_to_source.inverse();
  std::vector<int> phi_half_to_g2(2 * contraction.graph.num_edges(), -1);
  for (std::size_t h = 0; h < contraction.half_edge_map.size(); ++h) {
    if (contraction.half_edge_map[h] >= 0) phi_half_to_g2[contraction.half_edge_map[h]] = static_cast<int>(h);
  }
  auto to_g2 = [&](const Mark& m) {
    if (m.is_leg()) return m;
    int h = phi_half_to_g2.at(to_phi.half_edge_map.at(2 * m.a + m.b));
    return Mark::node(h / 2, h % 2);
  };

  PullbackPlan plan;
  plan.source_dim = source.total_dim;
  plan.target_dim = target.total_dim;
  const auto ends = gamma2.edges.at(e);
  for (const auto& s : source.summands) {
    PullbackPlan::Block block;
    block.source_offset = s.offset;
    block.source_dim = s.dim;
    int u = to_phi.vertex_map.at(s.vertex);
    std::vector<int> pre;
    for (int x = 0; x < gamma2.num_vertices(); ++x) {
      if (contraction.vertex_map[x] == u) pre.push_back(x);
    }
    std::vector<Mark> marks;
    for (const auto& m : s.alphabet) marks.push_back(to_g2(m));

    if (pre.size() == 1 && ends[0] == pre[0] && ends[1] == pre[0]) {
      // Loop contraction: genus-0 vertex below a genus-1 vertex.
      if (gamma2.genera[pre[0]] != 0) throw std::logic_error("loop contraction onto a genus >= 2 summand");
      block.kind = PullbackPlan::Block::Kind::LoopZero;
    } else if (pre.size() == 1) {
      block.kind = PullbackPlan::Block::Kind::Relabel;
      const VertexSummand* t = target.summand_at(pre[0]);
      if (!t || t->dim != s.dim) throw std::logic_error("relabeled vertex lost its H^11 summand");
      block.target_offset = t->offset;
      for (const auto& m : marks) block.image.push_back(specht::position(t->alphabet, m));
    } else if (pre.size() == 2) {
      block.kind = PullbackPlan::Block::Kind::Restrict;
      int ga = gamma2.genera[pre[0]], gb = gamma2.genera[pre[1]];
      if (ga + gb != 1) throw std::logic_error("split of a genus-1 vertex with genera " + std::to_string(ga) +
                                               "+" + std::to_string(gb));
      int t_vertex = ga == 1 ? pre[0] : pre[1];
      const VertexSummand* t = target.summand_at(t_vertex);
      if (t) {
        block.target_offset = t->offset;
        Mark p = Mark::node(e, ends[0] == t_vertex ? 0 : 1);
        for (const auto& m : marks) {
          block.image.push_back(gamma2.vertex_of(m) == t_vertex ? specht::position(t->alphabet, m) : -1);
        }
        block.p_pos = specht::position(t->alphabet, p);
      }
    } else {
      throw std::logic_error("contraction vertex has no preimage");
    }
    plan.blocks.push_back(std::move(block));
  }
  return plan;
}

ratlin::SparseMat contraction_pullback(const StableGraph& gamma2, int e, const VanishingLedger& ledger) {
  auto contraction = graphs::contract_edge(gamma2, e);
  GraphH11Basis source = graph_basis(contraction.graph, ledger);
  GraphH11Basis target = graph_basis(gamma2, ledger);
  PullbackPlan plan = plan_pullback(gamma2, target, e, source, graphs::GraphIso::identity(contraction.graph));
  std::vector<ratlin::Triplet> t;
  std::vector<std::pair<std::size_t, int>> terms;
  for (std::size_t j = 0; j < source.total_dim; ++j) {
    terms.clear();
    plan.apply(j, terms);
    for (auto [i, s] : terms) t.push_back({i, j, Rational(s)});
  }
  std::string skey = graphs::canonical_key(contraction.graph), tkey = graphs::canonical_key(gamma2);
  std::vector<std::string> rl, cl;
  for (std::size_t i = 0; i < target.total_dim; ++i) rl.push_back(target.label(tkey, i));
  for (std::size_t j = 0; j < source.total_dim; ++j) cl.push_back(source.label(skey, j));
  return ratlin::SparseMat(std::move(rl), std::move(cl), std::move(t));
}

ratlin::SignedAction automorphism_action(const GraphH11Basis& basis, bool twist_by_det) {
  const auto& g = basis.graph;
  auto auts = graphs::automorphisms(g);
  std::vector<ratlin::SignedPerm> elements;
  std::vector<int> character;
  std::vector<std::pair<std::size_t, int>> terms;
  for (const auto& iso : auts) {
    ratlin::SignedPerm perm = ratlin::SignedPerm::identity(basis.total_dim);
    for (const auto& s : basis.summands) {
      // A summand vertex carries at least 11 marks and at most 4 half-edges,
      // hence a leg: it is fixed, and so is its minimal mark.
      if (iso.vertex_map[s.vertex] != s.vertex) throw std::logic_error("automorphism moves an H^11 vertex");
      std::vector<int> image;
      for (const auto& m : s.alphabet) image.push_back(specht::position(s.alphabet, iso.map_mark(m)));
      if (image[0] != 0) throw std::logic_error("automorphism moves the minimal mark");
      for (std::size_t i = 0; i < s.dim; ++i) {
        terms.clear();
        pull_generator(i, image, -1, terms);
        if (terms.size() != 1) throw std::logic_error("automorphism is not a signed permutation");
        perm.image[s.offset + i] = s.offset + terms[0].first;
        perm.sign[s.offset + i] = terms[0].second;
      }
    }
    elements.push_back(std::move(perm));
    character.push_back(twist_by_det ? graphs::det_edge_character(g, iso) : 1);
  }
  return ratlin::SignedAction(std::move(elements), std::move(character));
}

TwistedInvariants twisted_invariants(const StableGraph& g, const VanishingLedger& ledger) {
  TwistedInvariants out;
  out.basis = graph_basis(g, ledger);
  auto action = automorphism_action(out.basis, true);
  out.automorphism_count = action.order();
  out.invariants = ratlin::invariant_basis(action);
  return out;
}

}  // namespace w11::h11
