#include "w11/complex11.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

#include "w11/parallel.hpp"

namespace w11::complex11 {

using graphs::StableGraph;
using ratlin::SparseMat;
using ratlin::SparseVec;
using ratlin::Triplet;
using specht::Mark;

std::string TermSummand::label(std::size_t k) const { return data.basis.label(key, data.invariants.pivots.at(k)); }

const TermSummand* ComplexTerm::find(const std::string& key) const {
  auto it = index.find(key);
  return it == index.end() ? nullptr : &summands[it->second];
}

std::vector<std::string> ComplexTerm::labels() const {
  std::vector<std::string> out;
  out.reserve(total_dim);
  for (const auto& s : summands)
    for (std::size_t k = 0; k < s.dim(); ++k) out.push_back(s.label(k));
  return out;
}

bool BlockOrderReport::all_injective() const {
  return std::all_of(groups.begin(), groups.end(), [](const BlockGroup& b) { return b.injective; });
}

namespace {

// Reads coordinates in an invariant basis at its pivots and checks the
// reconstruction.
class Projector {
 public:
  explicit Projector(const ratlin::InvariantBasis& b) : basis_(b) {
    for (std::size_t k = 0; k < b.pivots.size(); ++k) slot_.emplace(b.pivots[k], k);
  }

  std::optional<std::vector<std::pair<std::size_t, Rational>>> coordinates(const SparseVec& v) const {
    std::vector<std::pair<std::size_t, Rational>> c;
    for (const auto& [i, x] : v) {
      auto it = slot_.find(i);
      if (it != slot_.end()) c.emplace_back(it->second, x);
    }
    std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::map<std::size_t, Rational> acc;
    for (const auto& [k, x] : c)
      for (const auto& [j, y] : basis_.vectors[k]) acc[j] += x * y;
    SparseVec rebuilt;
    for (auto& [j, y] : acc)
      if (y != 0) rebuilt.emplace_back(j, y);
    if (rebuilt != v) return std::nullopt;
    return c;
  }

 private:
  const ratlin::InvariantBasis& basis_;
  std::unordered_map<std::size_t, std::size_t> slot_;
};

using ColumnOffset = std::function<std::optional<std::size_t>(std::size_t summand)>;

// Beta restricted to the rows of one level-2 graph: its invariant
// coordinates start at row_offset; domain summands without a column offset
// are skipped.
void beta_rows(const StableGraph& t, const h11::TwistedInvariants& td, std::size_t row_offset,
               const ComplexTerm& domain, const ColumnOffset& column_offset, std::vector<Triplet>& out) {
  std::map<std::pair<std::size_t, std::size_t>, SparseVec> images;
  std::map<std::size_t, std::size_t> col_of;
  for (int e = 0; e < t.num_edges(); ++e) {
    auto c = graphs::contract_edge(t, e);
    auto can = graphs::canonicalize(c.graph);
    auto it = domain.index.find(can.key);
    if (it == domain.index.end()) continue;
    auto col = column_offset(it->second);
    if (!col) continue;
    col_of[it->second] = *col;
    const TermSummand& r = domain.summands[it->second];
    auto plan = h11::plan_pullback(t, td.basis, e, r.data.basis, can.iso);
    const Rational sign = (e % 2 == 0) ? 1 : -1;
    for (std::size_t k = 0; k < r.dim(); ++k) {
      auto img = plan.apply(r.data.invariants.vectors[k]);
      ratlin::axpy(images[{it->second, k}], sign, img);
    }
  }
  if (images.empty()) return;
  Projector proj(td.invariants);
  for (const auto& [sk, vec] : images) {
    auto coords = proj.coordinates(vec);
    if (!coords) {
      throw ratlin::InconsistencyError("image of " + domain.summands[sk.first].key + " in " +
                                       graphs::canonical_key(t) + " is not twisted-invariant");
    }
    for (const auto& [slot, x] : *coords) out.push_back({row_offset + slot, col_of[sk.first] + sk.second, x});
  }
}

struct BuiltRow {
  StableGraph graph;
  std::string key;
  h11::TwistedInvariants data;
};

}  // namespace

ComplexTerm build_term(int g, int n, int level, const VanishingLedger& ledger, unsigned threads) {
  if (level < 1 || level > 2) throw std::invalid_argument("terms are built for one or two edges");
  auto keep = h11::nonzero_profile(ledger);
  auto graphs = level == 1 ? graphs::enumerate_one_edge(g, n, keep) : graphs::enumerate_two_edge(g, n, keep);
  std::vector<h11::TwistedInvariants> data(graphs.size());
  parallel_for(graphs.size(), threads, [&](std::size_t i) { data[i] = h11::twisted_invariants(graphs[i], ledger); });
  ComplexTerm term;
  term.g = g;
  term.n = n;
  term.level = level;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (data[i].invariants.dim() == 0) continue;
    TermSummand s;
    s.key = graphs::canonical_key(graphs[i]);
    s.graph = std::move(graphs[i]);
    s.data = std::move(data[i]);
    s.offset = term.total_dim;
    term.total_dim += s.dim();
    term.index.emplace(s.key, term.summands.size());
    term.summands.push_back(std::move(s));
  }
  return term;
}

namespace {

SparseMat alpha_from(const ComplexTerm& codomain, int n, const VanishingLedger& ledger) {
  StableGraph point{{1}, std::vector<int>(n, 0), {}};
  auto pb = h11::graph_basis(point, ledger);
  const std::string pkey = graphs::canonical_key(point);
  std::vector<Triplet> t;
  for (const auto& r : codomain.summands) {
    auto c = graphs::contract_edge(r.graph, 0);
    auto can = graphs::canonicalize(c.graph);
    auto plan = h11::plan_pullback(r.graph, r.data.basis, 0, pb, can.iso);
    Projector proj(r.data.invariants);
    for (std::size_t j = 0; j < pb.total_dim; ++j) {
      auto img = plan.apply(SparseVec{{j, Rational(1)}});
      auto coords = proj.coordinates(img);
      if (!coords) throw ratlin::InconsistencyError("alpha image in " + r.key + " is not invariant");
      for (const auto& [slot, x] : *coords) t.push_back({r.offset + slot, j, x});
    }
  }
  std::vector<std::string> cl;
  for (std::size_t j = 0; j < pb.total_dim; ++j) cl.push_back(pb.label(pkey, j));
  return SparseMat(codomain.labels(), std::move(cl), std::move(t));
}

SparseMat beta_from(const ComplexTerm& domain, const ComplexTerm& codomain, unsigned threads) {
  std::vector<std::vector<Triplet>> parts(codomain.summands.size());
  auto all = [&](std::size_t s) -> std::optional<std::size_t> { return domain.summands[s].offset; };
  parallel_for(codomain.summands.size(), threads, [&](std::size_t i) {
    const auto& t = codomain.summands[i];
    beta_rows(t.graph, t.data, t.offset, domain, all, parts[i]);
  });
  std::vector<Triplet> entries;
  for (auto& p : parts) entries.insert(entries.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  return SparseMat(codomain.labels(), domain.labels(), std::move(entries));
}

}  // namespace

SparseMat build_alpha(int n, const VanishingLedger& ledger, unsigned threads) {
  return alpha_from(build_term(1, n, 1, ledger, threads), n, ledger);
}

BetaMatrix assemble_beta(int g, int n, const VanishingLedger& ledger, unsigned threads) {
  BetaMatrix out;
  out.domain = build_term(g, n, 1, ledger, threads);
  out.codomain = build_term(g, n, 2, ledger, threads);
  out.matrix = beta_from(out.domain, out.codomain, threads);
  return out;
}

SparseMat build_beta(int g, int n, const VanishingLedger& ledger, unsigned threads) {
  return assemble_beta(g, n, ledger, threads).matrix;
}

bool check_beta_alpha_zero(int n, const VanishingLedger& ledger, unsigned threads) {
  auto b = assemble_beta(1, n, ledger, threads);
  auto a = alpha_from(b.domain, n, ledger);
  if (b.matrix.cols() != a.rows()) throw std::logic_error("alpha and beta do not compose");
  return b.matrix.multiply(a).is_zero();
}

// ---------------------------------------------------------------------------
// Block ordering.

namespace {

struct Assignment {
  int group = 0;
  int order_case = 0;  // ordering within the group
  std::vector<StableGraph> designated;
};

std::vector<Mark> marks_minus(const specht::Alphabet& all, const std::vector<Mark>& keep) {
  std::vector<Mark> out;
  for (const auto& m : all)
    if (std::find(keep.begin(), keep.end(), m) == keep.end()) out.push_back(m);
  return out;
}

// k-subsets of `items` in lexicographic order.
void for_each_subset(const std::vector<Mark>& items, int k, const std::function<void(const std::vector<Mark>&)>& f) {
  std::vector<Mark> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (static_cast<int>(cur.size()) == k) {
      f(cur);
      return;
    }
    for (std::size_t i = start; i + (k - cur.size()) <= items.size(); ++i) {
      cur.push_back(items[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

std::vector<Mark> legs_at(const StableGraph& g, int v) {
  std::vector<Mark> out;
  for (const auto& m : g.marks_at(v))
    if (m.kind == Mark::Kind::Leg) out.push_back(m);
  return out;
}

Mark node_at(const StableGraph& g, int v) {
  for (const auto& m : g.marks_at(v))
    if (m.kind == Mark::Kind::Node) return m;
  throw std::logic_error("vertex has no node");
}

std::vector<std::string> group_names(int g) {
  if (g == 2) return {"genus-2 vertex", "self-loop", "two genus-1 vertices"};
  return {"self-loop", "(" + std::to_string(g - 1) + ",1) splits", "other splits"};
}

Assignment assign(const StableGraph& r, int g) {
  Assignment a;
  if (r.is_loop(0)) {
    if (g == 2) {
      a.group = 1;
      // Gamma_B: ten of the marks stay on the genus-1 vertex, the rest go to
      // a new genus-0 vertex.
      auto all = r.marks_at(0);
      for_each_subset(all, 10, [&](const std::vector<Mark>& b) {
        a.designated.push_back(graphs::split_vertex(r, 0, marks_minus(all, b), 0));
      });
    } else {
      a.group = 0;
    }
    return a;
  }
  const int g0 = r.genera[0], g1 = r.genera[1];
  if (g == 2) {
    if (g0 != 1 || g1 != 1) {
      a.group = 0;
      return a;
    }
    a.group = 2;
    // A: the side with more legs (ties: vertex 0).
    auto l0 = legs_at(r, 0), l1 = legs_at(r, 1);
    int big = l0.size() >= l1.size() ? 0 : 1;
    int small = 1 - big;
    auto a_legs = big == 0 ? l0 : l1;
    auto c_legs = big == 0 ? l1 : l0;
    if (c_legs.size() <= 1) {
      a.order_case = static_cast<int>(c_legs.size());
      const Mark p = node_at(r, big);
      for_each_subset(a_legs, 10, [&](const std::vector<Mark>& b) {
        auto moved = marks_minus(a_legs, b);
        moved.push_back(p);
        std::sort(moved.begin(), moved.end());
        a.designated.push_back(graphs::split_vertex(r, big, moved, 0));
      });
    } else {
      a.order_case = 2;
      a.designated.push_back(graphs::split_vertex(r, small, {c_legs[0], c_legs[1]}, 0));
      a.designated.push_back(graphs::split_vertex(r, big, {a_legs[0], a_legs[1]}, 0));
    }
    return a;
  }
  if ((g0 == g - 1 && g1 == 1) || (g0 == 1 && g1 == g - 1)) {
    a.group = 1;
    a.designated.push_back(graphs::add_loop(r, g0 == g - 1 ? 0 : 1));
  } else {
    a.group = 2;
  }
  return a;
}

}  // namespace

BlockOrderReport block_order(int g, int n, const VanishingLedger& ledger, const Options& options,
                             bool keep_matrices) {
  if (g < 2) throw std::invalid_argument("block ordering is defined for genus >= 2");
  BlockOrderReport rep;
  rep.g = g;
  rep.n = n;
  const auto names = group_names(g);
  for (const auto& nm : names) rep.groups.push_back(BlockGroup{nm, {}, 0, 0, 0, 0, true, std::nullopt});
  if (g == 2 && n < 12) throw OrderingFailed("genus-2 block ordering needs at least 12 markings", rep);

  ComplexTerm domain = build_term(g, n, 1, ledger, options.threads);
  rep.domain_dim = domain.total_dim;

  std::vector<Assignment> asg(domain.summands.size());
  parallel_for(domain.summands.size(), options.threads,
               [&](std::size_t i) { asg[i] = assign(domain.summands[i].graph, g); });

  // Position of each summand in the global order (group, case, key).
  std::vector<std::size_t> order(domain.summands.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(asg[a].group, asg[a].order_case) < std::pair(asg[b].group, asg[b].order_case);
  });
  std::vector<std::size_t> position(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) position[order[k]] = k;

  for (std::size_t k : order) {
    auto& grp = rep.groups[asg[k].group];
    const auto& s = domain.summands[k];
    grp.summands.push_back({s.key, s.dim(), s.data.automorphism_count});
    grp.dim += s.dim();
  }
  const std::vector<bool> must_vanish = g == 2 ? std::vector<bool>{true, false, false}
                                               : std::vector<bool>{true, false, true};
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (must_vanish[i] && rep.groups[i].dim != 0) {
      rep.violations.push_back("group '" + names[i] + "' has dimension " + std::to_string(rep.groups[i].dim));
    }
  }
  if (!rep.violations.empty()) {
    rep.triangular = rep.summand_triangular = false;
    throw OrderingFailed(rep.violations.front(), rep);
  }

  // Designated graphs, deduplicated by key; each has a single owner group.
  struct Designated {
    std::string key;
    StableGraph graph;
    std::set<std::size_t> owners;
  };
  std::map<std::string, std::size_t> dindex;
  std::vector<Designated> des;
  for (std::size_t k : order) {
    for (auto& raw : asg[k].designated) {
      auto can = graphs::canonicalize(raw);
      auto [it, fresh] = dindex.try_emplace(can.key, des.size());
      if (fresh) des.push_back({can.key, std::move(can.graph), {}});
      des[it->second].owners.insert(k);
    }
  }

  std::vector<h11::TwistedInvariants> ddata(des.size());
  std::vector<std::vector<std::size_t>> hits(des.size());
  parallel_for(des.size(), options.threads, [&](std::size_t i) {
    ddata[i] = h11::twisted_invariants(des[i].graph, ledger);
    for (int e = 0; e < des[i].graph.num_edges(); ++e) {
      auto key = graphs::canonical_key(graphs::contract_edge(des[i].graph, e).graph);
      auto it = domain.index.find(key);
      if (it != domain.index.end()) hits[i].push_back(it->second);
    }
  });

  for (std::size_t i = 0; i < des.size(); ++i) {
    const auto& d = des[i];
    int group = asg[*d.owners.begin()].group;
    for (std::size_t o : d.owners) {
      if (asg[o].group != group) {
        rep.triangular = false;
        rep.violations.push_back(d.key + " is designated by two groups");
      }
    }
    std::size_t first = SIZE_MAX;
    for (std::size_t o : d.owners) first = std::min(first, position[o]);
    for (std::size_t h : hits[i]) {
      if (asg[h].group < group) {
        rep.triangular = false;
        rep.violations.push_back(d.key + " reaches earlier group summand " + domain.summands[h].key);
      }
      if (position[h] < first && !d.owners.count(h)) rep.summand_triangular = false;
    }
    if (ddata[i].invariants.dim() > 0) {
      auto& grp = rep.groups[group];
      grp.designated_graphs += 1;
      grp.designated_dim += ddata[i].invariants.dim();
    }
  }
  if (!rep.triangular) throw OrderingFailed(rep.violations.front(), rep);

  // Diagonal blocks.
  for (std::size_t gi = 0; gi < rep.groups.size(); ++gi) {
    auto& grp = rep.groups[gi];
    if (grp.dim == 0) continue;
    std::vector<std::optional<std::size_t>> col_offset(domain.summands.size());
    std::vector<std::string> cl;
    for (std::size_t k : order) {
      if (asg[k].group != static_cast<int>(gi)) continue;
      col_offset[k] = cl.size();
      const auto& s = domain.summands[k];
      for (std::size_t j = 0; j < s.dim(); ++j) cl.push_back(s.label(j));
    }
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < des.size(); ++i)
      if (asg[*des[i].owners.begin()].group == static_cast<int>(gi) && ddata[i].invariants.dim() > 0)
        rows.push_back(i);
    std::vector<std::size_t> row_offset(rows.size());
    std::vector<std::string> rl;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      row_offset[r] = rl.size();
      const auto& d = ddata[rows[r]];
      for (std::size_t k = 0; k < d.invariants.dim(); ++k) rl.push_back(d.basis.label(des[rows[r]].key, d.invariants.pivots[k]));
    }
    ColumnOffset colf = [&](std::size_t s) { return col_offset[s]; };
    std::vector<std::vector<Triplet>> parts(rows.size());
    parallel_for(rows.size(), options.threads, [&](std::size_t r) {
      beta_rows(des[rows[r]].graph, ddata[rows[r]], row_offset[r], domain, colf, parts[r]);
    });
    std::vector<Triplet> entries;
    for (auto& p : parts) entries.insert(entries.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    SparseMat block(std::move(rl), std::move(cl), std::move(entries));
    grp.rank = ratlin::rank(block, options.rank);
    grp.injective = grp.rank == grp.dim;
    if (keep_matrices) grp.matrix = std::move(block);
  }

  // Small cases: confirm the off-diagonal zeros and the rank on the full beta.
  if (domain.total_dim <= options.direct_limit) {
    ComplexTerm codomain = build_term(g, n, 2, ledger, options.threads);
    SparseMat beta = beta_from(domain, codomain, options.threads);
    std::vector<int> col_group;
    for (const auto& s : domain.summands)
      for (std::size_t j = 0; j < s.dim(); ++j) col_group.push_back(asg[domain.index.at(s.key)].group);
    std::vector<int> row_group(beta.rows(), -1);
    for (const auto& t : codomain.summands) {
      auto it = dindex.find(t.key);
      if (it == dindex.end()) continue;
      int grp = asg[*des[it->second].owners.begin()].group;
      for (std::size_t k = 0; k < t.dim(); ++k) row_group[t.offset + k] = grp;
    }
    bool zeros = true;
    for (const auto& e : beta.entries())
      if (row_group[e.row] >= 0 && col_group[e.col] < row_group[e.row]) zeros = false;
    rep.exact_zero_check = zeros;
    rep.direct_rank = ratlin::rank(beta, options.rank);
  }
  return rep;
}

// ---------------------------------------------------------------------------

InjectivityReport check_beta_injective(int g, int n, const VanishingLedger& ledger, const Options& options,
                                       bool keep_matrices) {
  InjectivityReport rep;
  rep.g = g;
  rep.n = n;
  rep.prime = options.rank.prime;
  ComplexTerm domain = build_term(g, n, 1, ledger, options.threads);
  rep.domain_dim = domain.total_dim;
  for (const auto& s : domain.summands) rep.summands.push_back({s.key, s.dim(), s.data.automorphism_count});
  const bool block_ok = g >= 3 || (g == 2 && n >= 12);
  if (domain.total_dim <= options.direct_limit || !block_ok) {
    rep.route = "direct";
    ComplexTerm codomain = build_term(g, n, 2, ledger, options.threads);
    rep.codomain_dim = codomain.total_dim;
    rep.level2_summands = codomain.summands.size();
    SparseMat beta = beta_from(domain, codomain, options.threads);
    auto r = ratlin::rank_with_stats(beta, options.rank);
    rep.rank = r.rank;
    rep.modular_rank = r.modular_rank;
    rep.exact_stats = r.exact_stats;
    rep.injective = r.rank == domain.total_dim;
    if (keep_matrices) rep.matrix = std::move(beta);
    return rep;
  }
  rep.route = "block-order";
  Options block_opts = options;
  block_opts.direct_limit = 0;  // no full beta on this route
  auto blocks = block_order(g, n, ledger, block_opts, keep_matrices);
  for (const auto& b : blocks.groups) rep.rank += b.rank;
  rep.injective = blocks.all_injective() && blocks.triangular;
  rep.blocks = std::move(blocks);
  return rep;
}

}  // namespace w11::complex11
