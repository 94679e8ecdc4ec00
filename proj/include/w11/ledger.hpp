#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace w11 {

struct Provenance {
  enum class Kind { Axiom, Computed, FormulaGenus01 };
  Kind kind = Kind::FormulaGenus01;
  std::string detail;  // citation tag, or report reference for Computed
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct VanishingStatus {
  enum class Kind { Vanishes, Nonzero, Unknown };
  Kind kind = Kind::Unknown;
  Provenance provenance;        // meaningful for Vanishes
  std::uint64_t dimension = 0;  // meaningful for Nonzero

  static VanishingStatus vanishes(Provenance p) { return {Kind::Vanishes, std::move(p), 0}; }
  static VanishingStatus nonzero(std::uint64_t dim) { return {Kind::Nonzero, {}, dim}; }
  static VanishingStatus unknown() { return {}; }
  bool is_vanishes() const { return kind == Kind::Vanishes; }
  bool is_unknown() const { return kind == Kind::Unknown; }
  friend bool operator==(const VanishingStatus&, const VanishingStatus&) = default;
};

std::string to_string(VanishingStatus::Kind k);
std::string to_string(Provenance::Kind k);

/// Raised when an H^11 dimension is requested for a genus >= 2 pair whose
/// status has not been established.
class UnknownStatus : public std::runtime_error {
 public:
  UnknownStatus(int g, int n);
  int g, n;
};

/// Raised when a computation consults an entry at or beyond the pair
/// currently being established.
class FrontierViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Per-(g, n) status of H^11. Genus 0 and 1 come from closed formulas;
/// genus >= 2 entries start Unknown and only ever move to Vanishes or
/// Nonzero.
class VanishingLedger {
 public:
  VanishingStatus status(int g, int n) const;
  /// Throws std::logic_error on a downgrade or a conflicting resolution.
  void set(int g, int n, const VanishingStatus& s);
  /// While set, consulting any genus >= 2 entry lexicographically >= the
  /// frontier throws FrontierViolation.
  void set_frontier(std::optional<std::pair<int, int>> frontier) { frontier_ = frontier; }
  std::optional<std::pair<int, int>> frontier() const { return frontier_; }
  const std::map<std::pair<int, int>, VanishingStatus>& entries() const { return entries_; }

  friend bool operator==(const VanishingLedger& a, const VanishingLedger& b) { return a.entries_ == b.entries_; }

 private:
  std::map<std::pair<int, int>, VanishingStatus> entries_;
  std::optional<std::pair<int, int>> frontier_;
};

}  // namespace w11
