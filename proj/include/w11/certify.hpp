#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "w11/complex11.hpp"
#include "w11/ledger.hpp"
#include "w11/serialize.hpp"

namespace w11::certify {

/// H^k_c(M_{g,n}) = 0 by the compact-support bound: k < 2g for n <= 1,
/// k < 2g - 2 + n for n >= 2. Throws for g = 0 or unstable (g, n).
bool hc_vanishes(int g, int n, int k);

/// Axiom tag for H^11(Mbar_{g,n}) when it is a base case, else nullopt.
std::optional<std::string> h11_base_case(int g, int n);

struct Axiom {
  std::string tag;
  std::string citation;
};
/// External results the certificates rest on.
const std::vector<Axiom>& axiom_table();
bool is_axiom(const std::string& tag);

struct Claim {
  std::string kind;  // vanishing, purity, hc-vanishing, beta-injective, odd-vanishing
  int g = 0, n = 0, k = 0;
  friend auto operator<=>(const Claim&, const Claim&) = default;
};

struct Certificate;
using CertPtr = std::shared_ptr<const Certificate>;

struct Certificate {
  Claim claim;
  std::string rule;
  std::vector<CertPtr> children;
  std::optional<std::string> axiom;
  std::optional<std::string> report;  // bundle-relative path
  Json detail = Json::object();
  /// Computed leaves built without a bundle keep their matrices here for
  /// replay; never serialized.
  std::shared_ptr<const std::vector<ratlin::SparseMat>> matrices;
};

/// Rules used at internal nodes and leaves.
namespace rule {
inline constexpr const char* kAxiom = "axiom";
inline constexpr const char* kCompactSupport = "compact-support";
inline constexpr const char* kBetaRank = "beta-rank";
inline constexpr const char* kWeightComplex = "weight-complex";
inline constexpr const char* kDegreeZero = "degree-zero";
inline constexpr const char* kBoundaryRecursion = "boundary-recursion";
}  // namespace rule

/// Node JSON with children given as content hashes.
Json node_json(const Certificate& c);
std::string certificate_hash(const Certificate& c);
/// Whole tree, children inlined.
Json tree_json(const Certificate& c);

class PrerequisiteUnknown : public std::runtime_error {
 public:
  PrerequisiteUnknown(const std::string& what, int g, int n) : std::runtime_error(what), g(g), n(n) {}
  int g, n;
};

class BetaNotInjective : public std::runtime_error {
 public:
  BetaNotInjective(const std::string& what, complex11::InjectivityReport report)
      : std::runtime_error(what), report(std::move(report)) {}
  complex11::InjectivityReport report;
};

class RecursionBlocked : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VerifyOptions {
  complex11::Options complex;
  /// When set, reports go to <bundle>/reports and matrices to
  /// <bundle>/matrices.
  std::optional<std::string> bundle_dir;
  /// Without a bundle, computed leaves hold their matrices for replay.
  bool keep_in_memory = true;
};

/// Certificate that H^11(Mbar_{g,n}) = 0, g >= 2. Consults the ledger only
/// below (g, n); records Vanishes on success.
CertPtr verify_h11(int g, int n, VanishingLedger& ledger, const VerifyOptions& options = {});

struct SweepEvent {
  int g = 0, n = 0;
  std::string message;
};

struct SweepResult {
  VanishingLedger ledger;
  std::vector<CertPtr> certificates;  // one per genus >= 2 pair, in order
  std::vector<SweepEvent> events;
};

/// Markings bound for genus g in sweep(gmax, nmax): nmax + 2(gmax - g),
/// so that the genus-(g-1) vertex of every self-loop graph is covered.
int sweep_markings_bound(int g, int gmax, int nmax);

/// Processes g = 2..gmax in lexicographic order. Starts from `initial`
/// (empty by default); existing entries must agree.
SweepResult sweep_h11(int gmax, int nmax, const VerifyOptions& options = {},
                      const VanishingLedger& initial = {});

/// Resolves every genus >= 2 pair that (g, n) may consult: g' < g with
/// n' <= n + 2(g - g'), and g' = g with n' < n.
SweepResult prepare_ledger(int g, int n, const VerifyOptions& options = {});

/// Writes index.json and certificates/ under the bundle directory.
void write_bundle(const std::string& dir, const SweepResult& result);

/// Certificate that H^k(Mbar_{g,n}) is pure Hodge-Tate, k even <= 12.
/// Memoized across calls.
CertPtr purity_certificate(int g, int n, int k);

struct ReplayResult {
  bool ok = true;
  std::size_t nodes = 0;
  std::size_t rank_checks = 0;
  std::vector<std::string> errors;
};

/// Re-validates every node: rule shape, predicates, axiom applicability, and
/// for computed leaves the ranks of the stored matrices (read from
/// bundle_dir).
ReplayResult replay(const CertPtr& root, const std::optional<std::string>& bundle_dir = std::nullopt,
                    const ratlin::RankOptions& rank = {});
/// Replays every certificate listed in <dir>/index.json.
ReplayResult replay_bundle(const std::string& dir, const ratlin::RankOptions& rank = {});
/// Loads a certificate tree back from a bundle.
CertPtr load_certificate(const std::string& dir, const std::string& hash);

}  // namespace w11::certify
