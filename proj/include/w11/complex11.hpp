#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "w11/graphs.hpp"
#include "w11/h11.hpp"
#include "w11/ledger.hpp"
#include "w11/ratlin.hpp"

namespace w11::complex11 {

struct TermSummand {
  graphs::StableGraph graph;  // canonical representative
  std::string key;
  h11::TwistedInvariants data;
  std::size_t offset = 0;

  std::size_t dim() const { return data.invariants.dim(); }
  std::string label(std::size_t k) const;  // label of invariant vector k
};

/// Sum over graphs with `level` edges of the twisted invariants. Graphs whose
/// invariant space is zero are left out.
struct ComplexTerm {
  int g = 0, n = 0, level = 0;
  std::vector<TermSummand> summands;  // sorted by key
  std::size_t total_dim = 0;
  std::map<std::string, std::size_t> index;

  const TermSummand* find(const std::string& key) const;
  std::vector<std::string> labels() const;
};

struct Options {
  unsigned threads = 1;
  ratlin::RankOptions rank;
  /// Domains up to this dimension get a full beta and a direct rank; larger
  /// ones go through the block ordering.
  std::size_t direct_limit = 3000;
};

ComplexTerm build_term(int g, int n, int level, const VanishingLedger& ledger, unsigned threads = 1);

/// Genus 1 only: H^11(M_{1,n}) in standard generators -> level-1 term.
ratlin::SparseMat build_alpha(int n, const VanishingLedger& ledger, unsigned threads = 1);

struct BetaMatrix {
  ComplexTerm domain, codomain;
  ratlin::SparseMat matrix;
};

/// Sign (-1)^i on the pullback along the i-th edge in canonical order.
/// Throws ratlin::InconsistencyError if an image fails to be twisted
/// invariant.
BetaMatrix assemble_beta(int g, int n, const VanishingLedger& ledger, unsigned threads = 1);
ratlin::SparseMat build_beta(int g, int n, const VanishingLedger& ledger, unsigned threads = 1);

bool check_beta_alpha_zero(int n, const VanishingLedger& ledger, unsigned threads = 1);

struct SummandInfo {
  std::string key;
  std::size_t dim = 0;
  std::size_t automorphisms = 1;
};

struct BlockGroup {
  std::string name;
  std::vector<SummandInfo> summands;  // domain summands in order
  std::size_t dim = 0;
  std::size_t designated_graphs = 0;
  std::size_t designated_dim = 0;
  std::size_t rank = 0;
  bool injective = true;
  std::optional<ratlin::SparseMat> matrix;  // diagonal block
};

struct BlockOrderReport {
  int g = 0, n = 0;
  std::size_t domain_dim = 0;
  std::vector<BlockGroup> groups;
  bool triangular = true;             // group granularity
  bool summand_triangular = true;     // each designated graph reaches only its owner among same-group summands
  std::vector<std::string> violations;
  std::optional<bool> exact_zero_check;  // off-diagonal zeros confirmed in the assembled beta
  std::optional<std::size_t> direct_rank;
  bool all_injective() const;
};

class OrderingFailed : public std::runtime_error {
 public:
  OrderingFailed(const std::string& what, BlockOrderReport report)
      : std::runtime_error(what), report(std::move(report)) {}
  BlockOrderReport report;
};

BlockOrderReport block_order(int g, int n, const VanishingLedger& ledger, const Options& options = {},
                             bool keep_matrices = false);

struct InjectivityReport {
  int g = 0, n = 0;
  std::size_t domain_dim = 0;
  std::optional<std::size_t> codomain_dim;
  std::size_t rank = 0;
  bool injective = false;
  std::string route;  // "direct" or "block-order"
  std::vector<SummandInfo> summands;
  std::size_t level2_summands = 0;
  ratlin::EliminationStats exact_stats;
  std::optional<std::size_t> modular_rank;
  std::uint64_t prime = 0;
  std::optional<BlockOrderReport> blocks;
  std::optional<ratlin::SparseMat> matrix;  // beta, direct route
};

InjectivityReport check_beta_injective(int g, int n, const VanishingLedger& ledger, const Options& options = {},
                                       bool keep_matrices = false);

}  // namespace w11::complex11
