#include "w11/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace w11 {

Json to_json(const ratlin::EliminationStats& s) {
  return {{"pivots", s.pivots},
          {"initial_nnz", s.initial_nnz},
          {"peak_nnz", s.peak_nnz},
          {"row_operations", s.row_operations}};
}

Json to_json(const complex11::SummandInfo& s) {
  return {{"key", s.key}, {"dim", s.dim}, {"automorphisms", s.automorphisms}};
}

Json to_json(const complex11::BlockOrderReport& r) {
  Json groups = Json::array();
  for (const auto& b : r.groups) {
    Json summands = Json::array();
    for (const auto& s : b.summands) summands.push_back(to_json(s));
    groups.push_back({{"name", b.name},
                      {"dim", b.dim},
                      {"summands", summands},
                      {"designated_graphs", b.designated_graphs},
                      {"designated_dim", b.designated_dim},
                      {"rank", b.rank},
                      {"injective", b.injective}});
  }
  Json j{{"g", r.g},
         {"n", r.n},
         {"domain_dim", r.domain_dim},
         {"groups", groups},
         {"triangular", r.triangular},
         {"summand_triangular", r.summand_triangular},
         {"violations", r.violations},
         {"all_injective", r.all_injective()}};
  j["exact_zero_check"] = r.exact_zero_check ? Json(*r.exact_zero_check) : Json(nullptr);
  j["direct_rank"] = r.direct_rank ? Json(*r.direct_rank) : Json(nullptr);
  return j;
}

Json to_json(const complex11::InjectivityReport& r) {
  Json summands = Json::array();
  for (const auto& s : r.summands) summands.push_back(to_json(s));
  Json j{{"g", r.g},
         {"n", r.n},
         {"domain_dim", r.domain_dim},
         {"rank", r.rank},
         {"rank_deficit", r.domain_dim - std::min(r.rank, r.domain_dim)},
         {"injective", r.injective},
         {"route", r.route},
         {"summands", summands},
         {"level2_summands", r.level2_summands},
         {"edge_order_convention", "canonical-key"},
         {"elimination", to_json(r.exact_stats)}};
  j["codomain_dim"] = r.codomain_dim ? Json(*r.codomain_dim) : Json(nullptr);
  j["modular_precheck"] = {{"enabled", r.modular_rank.has_value()},
                           {"prime", r.prime},
                           {"rank", r.modular_rank ? Json(*r.modular_rank) : Json(nullptr)}};
  j["blocks"] = r.blocks ? to_json(*r.blocks) : Json(nullptr);
  j["matrices"] = Json::array();
  return j;
}

Json to_json(const VanishingStatus& s) {
  Json j{{"status", to_string(s.kind)}};
  if (s.kind == VanishingStatus::Kind::Nonzero) j["dimension"] = s.dimension;
  if (s.kind == VanishingStatus::Kind::Vanishes)
    j["provenance"] = {{"kind", to_string(s.provenance.kind)}, {"detail", s.provenance.detail}};
  return j;
}

Json ledger_to_json(const VanishingLedger& ledger) {
  Json out = Json::array();
  for (const auto& [gn, s] : ledger.entries()) {
    Json j = to_json(s);
    j["g"] = gn.first;
    j["n"] = gn.second;
    out.push_back(j);
  }
  return out;
}

VanishingLedger ledger_from_json(const Json& j) {
  VanishingLedger out;
  for (const auto& e : j) {
    const std::string st = e.at("status");
    VanishingStatus s;
    if (st == "vanishes") {
      Provenance p;
      const std::string kind = e.at("provenance").at("kind");
      if (kind == "axiom") p.kind = Provenance::Kind::Axiom;
      else if (kind == "computed") p.kind = Provenance::Kind::Computed;
      else p.kind = Provenance::Kind::FormulaGenus01;
      p.detail = e.at("provenance").at("detail");
      s = VanishingStatus::vanishes(p);
    } else if (st == "nonzero") {
      s = VanishingStatus::nonzero(e.at("dimension"));
    } else {
      throw std::invalid_argument("ledger entry with status " + st);
    }
    out.set(e.at("g"), e.at("n"), s);
  }
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string content_hash(const Json& j) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return Json::parse(in);
}

}  // namespace w11
