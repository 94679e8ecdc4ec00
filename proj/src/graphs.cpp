#include "w11/graphs.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <stdexcept>

namespace w11::graphs {

using specht::Mark;

int StableGraph::valence(int v) const {
  int val = 0;
  for (int x : leg_vertex) val += (x == v);
  for (const auto& e : edges) val += (e[0] == v) + (e[1] == v);
  return val;
}

int StableGraph::betti_number() const {
  if (genera.empty()) return 0;
  return num_edges() - num_vertices() + 1;
}

int StableGraph::genus() const {
  return std::accumulate(genera.begin(), genera.end(), 0) + betti_number();
}

bool StableGraph::is_connected() const {
  if (genera.empty()) return false;
  std::vector<int> parent(genera.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) parent[find(e[0])] = find(e[1]);
  int root = find(0);
  for (int v = 1; v < num_vertices(); ++v) {
    if (find(v) != root) return false;
  }
  return true;
}

bool StableGraph::is_stable() const {
  for (int v = 0; v < num_vertices(); ++v) {
    if (2 * genera[v] - 2 + valence(v) <= 0) return false;
  }
  return true;
}

void StableGraph::validate() const {
  if (genera.empty()) throw std::invalid_argument("graph has no vertices");
  for (int gv : genera) {
    if (gv < 0) throw std::invalid_argument("negative vertex genus");
  }
  for (int x : leg_vertex) {
    if (x < 0 || x >= num_vertices()) throw std::invalid_argument("leg attached to a missing vertex");
  }
  for (const auto& e : edges) {
    if (e[0] < 0 || e[0] >= num_vertices() || e[1] < 0 || e[1] >= num_vertices()) {
      throw std::invalid_argument("edge endpoint out of range");
    }
  }
  if (!is_connected()) throw std::invalid_argument("graph is not connected");
  if (!is_stable()) throw std::invalid_argument("graph has an unstable vertex");
}

specht::Alphabet StableGraph::marks_at(int v) const {
  specht::Alphabet out;
  for (int k = 0; k < num_legs(); ++k) {
    if (leg_vertex[k] == v) out.push_back(Mark::leg(k + 1));
  }
  for (int e = 0; e < num_edges(); ++e) {
    for (int s = 0; s < 2; ++s) {
      if (edges[e][s] == v) out.push_back(Mark::node(e, s));
    }
  }
  return out;
}

int StableGraph::vertex_of(const Mark& mark) const {
  if (mark.is_leg()) return leg_vertex.at(mark.a - 1);
  return edges.at(mark.a)[mark.b];
}

// ---------------------------------------------------------------------------

GraphIso GraphIso::identity(const StableGraph& g) {
  GraphIso iso;
  iso.vertex_map.resize(g.num_vertices());
  std::iota(iso.vertex_map.begin(), iso.vertex_map.end(), 0);
  iso.half_edge_map.resize(2 * g.num_edges());
  std::iota(iso.half_edge_map.begin(), iso.half_edge_map.end(), 0);
  return iso;
}

GraphIso GraphIso::compose(const GraphIso& other) const {
  GraphIso out;
  out.vertex_map.resize(other.vertex_map.size());
  for (std::size_t v = 0; v < other.vertex_map.size(); ++v) out.vertex_map[v] = vertex_map.at(other.vertex_map[v]);
  out.half_edge_map.resize(other.half_edge_map.size());
  for (std::size_t h = 0; h < other.half_edge_map.size(); ++h) {
    out.half_edge_map[h] = half_edge_map.at(other.half_edge_map[h]);
  }
  return out;
}

GraphIso GraphIso::inverse() const {
  GraphIso out;
  out.vertex_map.assign(vertex_map.size(), -1);
  for (std::size_t v = 0; v < vertex_map.size(); ++v) out.vertex_map.at(vertex_map[v]) = static_cast<int>(v);
  out.half_edge_map.assign(half_edge_map.size(), -1);
  for (std::size_t h = 0; h < half_edge_map.size(); ++h) {
    out.half_edge_map.at(half_edge_map[h]) = static_cast<int>(h);
  }
  return out;
}

Mark GraphIso::map_mark(const Mark& m) const {
  if (m.is_leg()) return m;
  int h = half_edge_map.at(2 * m.a + m.b);
  return Mark::node(h / 2, h % 2);
}

bool is_isomorphism(const StableGraph& a, const StableGraph& b, const GraphIso& iso) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() || a.num_legs() != b.num_legs()) {
    return false;
  }
  if (iso.vertex_map.size() != a.genera.size() || iso.half_edge_map.size() != 2 * a.edges.size()) return false;
  std::vector<char> vhit(b.genera.size(), 0), hhit(2 * b.edges.size(), 0);
  for (int v = 0; v < a.num_vertices(); ++v) {
    int w = iso.vertex_map[v];
    if (w < 0 || w >= b.num_vertices() || vhit[w]) return false;
    vhit[w] = 1;
    if (a.genera[v] != b.genera[w]) return false;
  }
  for (int k = 0; k < a.num_legs(); ++k) {
    if (iso.vertex_map[a.leg_vertex[k]] != b.leg_vertex[k]) return false;
  }
  for (int h = 0; h < 2 * a.num_edges(); ++h) {
    int k = iso.half_edge_map[h];
    if (k < 0 || k >= 2 * b.num_edges() || hhit[k]) return false;
    hhit[k] = 1;
    if (iso.vertex_map[a.half_edge_vertex(h)] != b.half_edge_vertex(k)) return false;
    // Pairing: the partner of h maps to the partner of k.
    if (iso.half_edge_map[h ^ 1] != (k ^ 1)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Canonical form.

namespace {

constexpr long kPermutationCap = 2'000'000;

std::vector<int> rank_signatures(const std::vector<std::vector<int>>& sigs) {
  std::vector<std::vector<int>> distinct = sigs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<int> out(sigs.size());
  for (std::size_t v = 0; v < sigs.size(); ++v) {
    out[v] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), sigs[v]) - distinct.begin());
  }
  return out;
}

std::vector<int> refined_colors(const StableGraph& g) {
  const int V = g.num_vertices();
  std::vector<std::vector<int>> sigs(V);
  std::vector<std::vector<int>> legs(V);
  for (int k = 0; k < g.num_legs(); ++k) legs[g.leg_vertex[k]].push_back(k + 1);
  std::vector<int> loops(V, 0);
  for (const auto& e : g.edges) {
    if (e[0] == e[1]) ++loops[e[0]];
  }
  for (int v = 0; v < V; ++v) {
    sigs[v] = {g.genera[v], g.valence(v), loops[v], static_cast<int>(legs[v].size())};
    sigs[v].insert(sigs[v].end(), legs[v].begin(), legs[v].end());
  }
  std::vector<int> color = rank_signatures(sigs);
  int classes = *std::max_element(color.begin(), color.end()) + 1;
  while (true) {
    for (int v = 0; v < V; ++v) {
      std::vector<int> nb;
      for (const auto& e : g.edges) {
        if (e[0] == e[1]) continue;
        if (e[0] == v) nb.push_back(color[e[1]]);
        if (e[1] == v) nb.push_back(color[e[0]]);
      }
      std::sort(nb.begin(), nb.end());
      sigs[v].assign(1, color[v]);
      sigs[v].insert(sigs[v].end(), nb.begin(), nb.end());
    }
    std::vector<int> next = rank_signatures(sigs);
    int next_classes = *std::max_element(next.begin(), next.end()) + 1;
    color = std::move(next);
    if (next_classes == classes) break;
    classes = next_classes;
  }
  return color;
}

struct EdgeSlot {
  int lo, hi, orig;
  bool flip;
};

std::vector<EdgeSlot> sorted_edges(const StableGraph& g, const std::vector<int>& new_of) {
  std::vector<EdgeSlot> slots;
  slots.reserve(g.edges.size());
  for (int e = 0; e < g.num_edges(); ++e) {
    int a = new_of[g.edges[e][0]];
    int b = new_of[g.edges[e][1]];
    slots.push_back({std::min(a, b), std::max(a, b), e, a > b});
  }
  std::stable_sort(slots.begin(), slots.end(), [](const EdgeSlot& x, const EdgeSlot& y) {
    return x.lo != y.lo ? x.lo < y.lo : x.hi < y.hi;
  });
  return slots;
}

std::vector<int> encode(const StableGraph& g, const std::vector<int>& new_of) {
  std::vector<int> code;
  code.reserve(g.leg_vertex.size() + 2 * g.edges.size());
  for (int v : g.leg_vertex) code.push_back(new_of[v]);
  std::vector<std::pair<int, int>> pairs;
  for (const auto& e : g.edges) {
    int a = new_of[e[0]], b = new_of[e[1]];
    pairs.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(pairs.begin(), pairs.end());
  for (auto [a, b] : pairs) {
    code.push_back(a);
    code.push_back(b);
  }
  return code;
}

std::string key_of(const StableGraph& c) {
  std::string key = "V:";
  for (int v = 0; v < c.num_vertices(); ++v) {
    if (v) key += ',';
    key += std::to_string(c.genera[v]);
  }
  key += "|L:";
  for (int k = 0; k < c.num_legs(); ++k) {
    if (k) key += ',';
    key += std::to_string(c.leg_vertex[k]);
  }
  key += "|E:";
  for (int e = 0; e < c.num_edges(); ++e) {
    if (e) key += '.';
    key += std::to_string(c.edges[e][0]) + "-" + std::to_string(c.edges[e][1]);
  }
  return key;
}

}  // namespace

Canonical canonicalize(const StableGraph& g) {
  const int V = g.num_vertices();
  std::vector<int> color = refined_colors(g);
  // Vertices listed by color; each color class occupies a contiguous block of
  // new indices, and permutations within blocks are tried exhaustively.
  std::vector<int> order(V);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return color[a] < color[b]; });
  std::vector<std::pair<int, int>> blocks;  // [begin, end) in `order`
  for (int i = 0; i < V;) {
    int j = i;
    while (j < V && color[order[j]] == color[order[i]]) ++j;
    blocks.emplace_back(i, j);
    i = j;
  }
  long total = 1;
  for (auto [b, e] : blocks) {
    for (int k = 2; k <= e - b; ++k) {
      total *= k;
      if (total > kPermutationCap) throw std::runtime_error("canonical form: too many tied vertices");
    }
  }

  std::vector<int> best_new_of;
  std::vector<int> best_code;
  std::vector<int> current = order;
  std::vector<int> new_of(V);
  while (true) {
    for (int i = 0; i < V; ++i) new_of[current[i]] = i;
    std::vector<int> code = encode(g, new_of);
    if (best_new_of.empty() || code < best_code) {
      best_code = std::move(code);
      best_new_of = new_of;
    }
    // Odometer over block permutations.
    int bi = static_cast<int>(blocks.size()) - 1;
    for (; bi >= 0; --bi) {
      auto [b, e] = blocks[bi];
      if (std::next_permutation(current.begin() + b, current.begin() + e)) break;
    }
    if (bi < 0) break;
  }

  Canonical out;
  StableGraph& c = out.graph;
  c.genera.assign(V, 0);
  for (int v = 0; v < V; ++v) c.genera[best_new_of[v]] = g.genera[v];
  c.leg_vertex.resize(g.leg_vertex.size());
  for (std::size_t k = 0; k < g.leg_vertex.size(); ++k) c.leg_vertex[k] = best_new_of[g.leg_vertex[k]];
  out.iso.vertex_map = best_new_of;
  out.iso.half_edge_map.assign(2 * g.edges.size(), -1);
  auto slots = sorted_edges(g, best_new_of);
  c.edges.resize(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& s = slots[i];
    c.edges[i] = {s.lo, s.hi};
    for (int side = 0; side < 2; ++side) {
      out.iso.half_edge_map[2 * s.orig + side] = static_cast<int>(2 * i) + (side ^ (s.flip ? 1 : 0));
    }
  }
  out.key = key_of(c);
  return out;
}

std::string canonical_key(const StableGraph& g) { return canonicalize(g).key; }

// ---------------------------------------------------------------------------

Contraction contract_edge(const StableGraph& g, int e) {
  if (e < 0 || e >= g.num_edges()) throw std::out_of_range("edge index out of range");
  Contraction out;
  const int V = g.num_vertices();
  out.vertex_map.resize(V);
  StableGraph& c = out.graph;
  int a = g.edges[e][0], b = g.edges[e][1];
  if (a == b) {
    std::iota(out.vertex_map.begin(), out.vertex_map.end(), 0);
    c.genera = g.genera;
    c.genera[a] += 1;
  } else {
    int next = 0;
    for (int v = 0; v < V; ++v) {
      if (v == b) continue;
      out.vertex_map[v] = next++;
    }
    out.vertex_map[b] = out.vertex_map[a];
    c.genera.assign(V - 1, 0);
    for (int v = 0; v < V; ++v) c.genera[out.vertex_map[v]] += g.genera[v];
  }
  c.leg_vertex.resize(g.leg_vertex.size());
  for (std::size_t k = 0; k < g.leg_vertex.size(); ++k) c.leg_vertex[k] = out.vertex_map[g.leg_vertex[k]];
  out.half_edge_map.assign(2 * g.edges.size(), -1);
  for (int f = 0; f < g.num_edges(); ++f) {
    if (f == e) continue;
    int nf = static_cast<int>(c.edges.size());
    c.edges.push_back({out.vertex_map[g.edges[f][0]], out.vertex_map[g.edges[f][1]]});
    out.half_edge_map[2 * f] = 2 * nf;
    out.half_edge_map[2 * f + 1] = 2 * nf + 1;
  }
  return out;
}

std::vector<GraphIso> automorphisms(const StableGraph& g) {
  if (g.num_edges() > 2) throw std::invalid_argument("automorphisms supported for at most two edges");
  const int V = g.num_vertices();
  const int E = g.num_edges();
  std::vector<GraphIso> out;
  std::vector<int> vperm(V);
  std::iota(vperm.begin(), vperm.end(), 0);
  std::vector<int> eperm(E);
  do {
    bool ok = true;
    for (int v = 0; v < V && ok; ++v) ok = g.genera[vperm[v]] == g.genera[v];
    for (int k = 0; k < g.num_legs() && ok; ++k) ok = vperm[g.leg_vertex[k]] == g.leg_vertex[k];
    if (!ok) continue;
    std::iota(eperm.begin(), eperm.end(), 0);
    do {
      for (int flips = 0; flips < (1 << E); ++flips) {
        GraphIso iso;
        iso.vertex_map = vperm;
        iso.half_edge_map.resize(2 * E);
        for (int e = 0; e < E; ++e) {
          int f = (flips >> e) & 1;
          iso.half_edge_map[2 * e] = 2 * eperm[e] + f;
          iso.half_edge_map[2 * e + 1] = 2 * eperm[e] + (1 - f);
        }
        if (is_isomorphism(g, g, iso)) out.push_back(std::move(iso));
      }
    } while (std::next_permutation(eperm.begin(), eperm.end()));
  } while (std::next_permutation(vperm.begin(), vperm.end()));
  return out;
}

int det_edge_character(const StableGraph& g, const GraphIso& iso) {
  std::vector<int> perm(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) perm[e] = iso.half_edge_map.at(2 * e) / 2;
  return specht::perm_sign(perm);
}

// ---------------------------------------------------------------------------
// Enumeration.

namespace {

struct Shape {
  std::vector<int> genera;
  std::vector<std::array<int, 2>> edges;
};

void compositions(int n, int parts, std::vector<int>& cur, const std::function<void()>& visit) {
  if (static_cast<int>(cur.size()) == parts - 1) {
    cur.push_back(n);
    visit();
    cur.pop_back();
    return;
  }
  for (int c = 0; c <= n; ++c) {
    cur.push_back(c);
    compositions(n - c, parts, cur, visit);
    cur.pop_back();
  }
}

void distribute(const Shape& shape, int n, const ProfileFilter& keep, std::map<std::string, StableGraph>& out) {
  const int V = static_cast<int>(shape.genera.size());
  std::vector<int> degree(V, 0);
  for (const auto& e : shape.edges) {
    ++degree[e[0]];
    ++degree[e[1]];
  }
  std::vector<int> counts;
  compositions(n, V, counts, [&] {
    std::vector<int> valence(V);
    for (int v = 0; v < V; ++v) {
      valence[v] = degree[v] + counts[v];
      if (2 * shape.genera[v] - 2 + valence[v] <= 0) return;
    }
    if (keep && !keep(shape.genera, valence)) return;
    StableGraph g{shape.genera, std::vector<int>(n, 0), shape.edges};
    std::vector<int> left = counts;
    std::function<void(int)> place = [&](int k) {
      if (k == n) {
        auto c = canonicalize(g);
        out.try_emplace(c.key, std::move(c.graph));
        return;
      }
      for (int v = 0; v < V; ++v) {
        if (left[v] == 0) continue;
        --left[v];
        g.leg_vertex[k] = v;
        place(k + 1);
        ++left[v];
      }
    };
    place(0);
  });
}

void require_stable(int g, int n) {
  if (g < 0 || n < 0 || 2 * g - 2 + n <= 0) {
    throw std::invalid_argument("unstable pair (g, n) = (" + std::to_string(g) + ", " + std::to_string(n) + ")");
  }
}

std::vector<StableGraph> collect(std::map<std::string, StableGraph>& m) {
  std::vector<StableGraph> out;
  out.reserve(m.size());
  for (auto& [k, g] : m) out.push_back(std::move(g));
  return out;
}

}  // namespace

std::vector<StableGraph> enumerate_one_edge(int g, int n, const ProfileFilter& keep) {
  require_stable(g, n);
  std::map<std::string, StableGraph> found;
  if (g >= 1) distribute({{g - 1}, {{0, 0}}}, n, keep, found);
  for (int g1 = 0; g1 <= g; ++g1) distribute({{g1, g - g1}, {{0, 1}}}, n, keep, found);
  return collect(found);
}

std::vector<StableGraph> enumerate_two_edge(int g, int n, const ProfileFilter& keep) {
  require_stable(g, n);
  std::map<std::string, StableGraph> found;
  if (g >= 2) distribute({{g - 2}, {{0, 0}, {0, 0}}}, n, keep, found);
  for (int a = 0; a <= g - 1; ++a) {
    distribute({{a, g - 1 - a}, {{0, 0}, {0, 1}}}, n, keep, found);
    distribute({{a, g - 1 - a}, {{0, 1}, {0, 1}}}, n, keep, found);
  }
  for (int a = 0; a <= g; ++a) {
    for (int b = 0; a + b <= g; ++b) distribute({{a, b, g - a - b}, {{0, 1}, {1, 2}}}, n, keep, found);
  }
  return collect(found);
}

std::vector<StableGraph> enumerate_stable_trees(int n) {
  if (n < 3) throw std::invalid_argument("stable trees need at least 3 legs");
  std::map<std::string, StableGraph> all;
  std::map<std::string, StableGraph> level;
  StableGraph root{{0}, std::vector<int>(n, 0), {}};
  level.emplace(canonical_key(root), root);
  while (!level.empty()) {
    std::map<std::string, StableGraph> next;
    for (const auto& [key, t] : level) {
      for (int v = 0; v < t.num_vertices(); ++v) {
        auto marks = t.marks_at(v);
        const int m = static_cast<int>(marks.size());
        if (m < 4) continue;
        // Subsets avoiding marks[0], with 2 <= |S| <= m-2.
        for (std::uint32_t s = 0; s < (1u << (m - 1)); ++s) {
          int size = std::popcount(s);
          if (size < 2 || size > m - 2) continue;
          std::vector<Mark> moved;
          for (int i = 0; i < m - 1; ++i) {
            if (s >> i & 1u) moved.push_back(marks[i + 1]);
          }
          auto c = canonicalize(split_vertex(t, v, moved, 0));
          next.try_emplace(c.key, std::move(c.graph));
        }
      }
    }
    for (auto& [k, t] : level) all.emplace(k, std::move(t));
    level = std::move(next);
  }
  return collect(all);
}

StableGraph split_vertex(const StableGraph& g, int v, const std::vector<Mark>& moved, int moved_genus) {
  if (v < 0 || v >= g.num_vertices()) throw std::out_of_range("vertex out of range");
  if (moved_genus < 0 || moved_genus > g.genera[v]) throw std::invalid_argument("bad genus split");
  StableGraph out = g;
  const int w = g.num_vertices();
  out.genera[v] -= moved_genus;
  out.genera.push_back(moved_genus);
  for (const auto& m : moved) {
    if (g.vertex_of(m) != v) throw std::invalid_argument("moved mark " + m.str() + " is not at the split vertex");
    if (m.is_leg()) {
      out.leg_vertex[m.a - 1] = w;
    } else {
      out.edges[m.a][m.b] = w;
    }
  }
  out.edges.push_back({v, w});
  out.validate();
  return out;
}

StableGraph add_loop(const StableGraph& g, int v) {
  if (v < 0 || v >= g.num_vertices()) throw std::out_of_range("vertex out of range");
  if (g.genera[v] < 1) throw std::invalid_argument("adding a loop needs positive vertex genus");
  StableGraph out = g;
  out.genera[v] -= 1;
  out.edges.push_back({v, v});
  out.validate();
  return out;
}

}  // namespace w11::graphs
