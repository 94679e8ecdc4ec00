#include "w11/ledger.hpp"

#include <gmpxx.h>

namespace w11 {

std::string to_string(VanishingStatus::Kind k) {
  switch (k) {
    case VanishingStatus::Kind::Vanishes: return "vanishes";
    case VanishingStatus::Kind::Nonzero: return "nonzero";
    case VanishingStatus::Kind::Unknown: return "unknown";
  }
  return "?";
}

std::string to_string(Provenance::Kind k) {
  switch (k) {
    case Provenance::Kind::Axiom: return "axiom";
    case Provenance::Kind::Computed: return "computed";
    case Provenance::Kind::FormulaGenus01: return "formula-genus-0-1";
  }
  return "?";
}

UnknownStatus::UnknownStatus(int g_, int n_)
    : std::runtime_error("H^11 status of (g, n) = (" + std::to_string(g_) + ", " + std::to_string(n_) +
                         ") is unknown"),
      g(g_),
      n(n_) {}

VanishingStatus VanishingLedger::status(int g, int n) const {
  if (g < 0 || n < 0) throw std::invalid_argument("negative genus or marking count");
  if (g == 0) return VanishingStatus::vanishes({Provenance::Kind::FormulaGenus01, "Keel"});
  if (g == 1) {
    if (n >= 11) {
      mpz_class b;
      mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n - 1), 10);
      if (!b.fits_ulong_p()) throw std::overflow_error("genus-1 dimension exceeds 64 bits");
      return VanishingStatus::nonzero(b.get_ui());
    }
    return VanishingStatus::vanishes({Provenance::Kind::FormulaGenus01, "genus-1 formula"});
  }
  if (frontier_ && std::make_pair(g, n) >= *frontier_) {
    throw FrontierViolation("consulted (" + std::to_string(g) + ", " + std::to_string(n) +
                            ") while establishing (" + std::to_string(frontier_->first) + ", " +
                            std::to_string(frontier_->second) + ")");
  }
  auto it = entries_.find({g, n});
  return it == entries_.end() ? VanishingStatus::unknown() : it->second;
}

void VanishingLedger::set(int g, int n, const VanishingStatus& s) {
  if (g <= 1) throw std::logic_error("genus 0 and 1 statuses are fixed by formula");
  if (s.is_unknown()) throw std::logic_error("cannot record an unknown status");
  auto [it, inserted] = entries_.try_emplace({g, n}, s);
  if (inserted) return;
  if (it->second.kind != s.kind || it->second.dimension != s.dimension) {
    throw std::logic_error("ledger entry (" + std::to_string(g) + ", " + std::to_string(n) +
                           ") would change from " + to_string(it->second.kind) + " to " + to_string(s.kind));
  }
  // Same resolution again: keep the first provenance.
}

}  // namespace w11
