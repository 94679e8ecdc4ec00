#include "w11/certify.hpp"

#include <filesystem>
#include <mutex>
#include <set>

#include "w11/specht.hpp"

namespace w11::certify {

namespace fs = std::filesystem;

namespace {

void require_stable(int g, int n) {
  if (g < 0 || n < 0 || 2 * g - 2 + n <= 0)
    throw std::invalid_argument("unstable pair (" + std::to_string(g) + ", " + std::to_string(n) + ")");
}

std::string gn(int g, int n) { return "(" + std::to_string(g) + ", " + std::to_string(n) + ")"; }

Json claim_json(const Claim& c) { return {{"kind", c.kind}, {"g", c.g}, {"n", c.n}, {"k", c.k}}; }

Claim claim_from(const Json& j) {
  return {j.at("kind").get<std::string>(), j.at("g").get<int>(), j.at("n").get<int>(), j.at("k").get<int>()};
}

CertPtr leaf(Claim c, const std::string& rule, std::optional<std::string> axiom, Json detail = Json::object()) {
  auto out = std::make_shared<Certificate>();
  out->claim = std::move(c);
  out->rule = rule;
  out->axiom = std::move(axiom);
  out->detail = std::move(detail);
  return out;
}

CertPtr compact_support_leaf(int g, int n, int k) {
  if (!hc_vanishes(g, n, k)) throw RecursionBlocked("compact-support bound fails at " + gn(g, n) + ", k = " + std::to_string(k));
  Json d{{"bound", n <= 1 ? 2 * g : 2 * g - 2 + n}};
  return leaf({"hc-vanishing", g, n, k}, rule::kCompactSupport, std::nullopt, d);
}

}  // namespace

bool hc_vanishes(int g, int n, int k) {
  if (g == 0) throw std::invalid_argument("compact-support vanishing needs g >= 1");
  require_stable(g, n);
  return n <= 1 ? k < 2 * g : k < 2 * g - 2 + n;
}

std::optional<std::string> h11_base_case(int g, int n) {
  require_stable(g, n);
  if (g == 0) return "Keel";
  if (g == 1) return n <= 10 ? std::optional<std::string>("genus-1 formula") : std::nullopt;
  if (2 * g - 2 + n <= 11) return "CL-CKgP";
  if (g == 2 && (n == 10 || n == 11)) return "rationality";
  return std::nullopt;
}

const std::vector<Axiom>& axiom_table() {
  static const std::vector<Axiom> table{
      {"Keel", "Keel 1992: the cohomology of genus-0 moduli spaces is generated by boundary classes"},
      {"genus-1 formula", "Getzler 1998: H^11 of genus-1 moduli with n <= 10 markings vanishes"},
      {"CL-CKgP", "Chow-Kunneth generation in low excess: cohomology is tautological for g >= 2, 2g-2+n <= 11 "
                  "(H^11 = 0), and for g >= 3, 2g-2+n <= 12 (even degrees pure)"},
      {"rationality", "Mbar_{2,10} and Mbar_{2,11} are rational, so H^{11,0} = 0 and H^11 = 0"},
      {"even taut", "Petersen: even cohomology of genus-1 moduli spaces is tautological"},
      {"g = 2, n < 20", "Petersen: cohomology of genus-2 moduli spaces with n < 20 is tautological"},
      {"odd vanishing", "Arbarello-Cornalba: H^j(Mbar_{g,n}) = 0 for odd j <= 5"},
  };
  return table;
}

bool is_axiom(const std::string& tag) {
  for (const auto& a : axiom_table())
    if (a.tag == tag) return true;
  return false;
}

// ---------------------------------------------------------------------------
// JSON and hashing.

Json node_json(const Certificate& c) {
  Json children = Json::array();
  for (const auto& ch : c.children) children.push_back(certificate_hash(*ch));
  Json j{{"claim", claim_json(c.claim)}, {"rule", c.rule}, {"children", children}, {"detail", c.detail}};
  j["axiom"] = c.axiom ? Json(*c.axiom) : Json(nullptr);
  j["report"] = c.report ? Json(*c.report) : Json(nullptr);
  return j;
}

std::string certificate_hash(const Certificate& c) { return content_hash(node_json(c)); }

Json tree_json(const Certificate& c) {
  Json j = node_json(c);
  Json children = Json::array();
  for (const auto& ch : c.children) children.push_back(tree_json(*ch));
  j["children"] = children;
  return j;
}

// ---------------------------------------------------------------------------
// H^11 vanishing.

namespace {

std::string report_stem(int g, int n) { return "beta_g" + std::to_string(g) + "_n" + std::to_string(n); }

class FrontierScope {
 public:
  FrontierScope(VanishingLedger& l, int g, int n) : ledger_(l), saved_(l.frontier()) { l.set_frontier({{g, n}}); }
  ~FrontierScope() { ledger_.set_frontier(saved_); }

 private:
  VanishingLedger& ledger_;
  std::optional<std::pair<int, int>> saved_;
};

}  // namespace

CertPtr verify_h11(int g, int n, VanishingLedger& ledger, const VerifyOptions& options) {
  if (g < 2) throw std::invalid_argument("verify_h11 needs g >= 2");
  require_stable(g, n);
  auto base = h11_base_case(g, n);
  if (base && *base != "rationality") {
    ledger.set(g, n, VanishingStatus::vanishes({Provenance::Kind::Axiom, *base}));
    return leaf({"vanishing", g, n, 11}, rule::kAxiom, base);
  }

  complex11::InjectivityReport rep;
  {
    FrontierScope scope(ledger, g, n);
    try {
      rep = complex11::check_beta_injective(g, n, ledger, options.complex,
                                           options.bundle_dir || options.keep_in_memory);
    } catch (const UnknownStatus& e) {
      throw PrerequisiteUnknown(std::string("prerequisite unresolved: ") + e.what(), e.g, e.n);
    }
  }
  if (!rep.injective) {
    rep.matrix.reset();
    throw BetaNotInjective("beta is not injective at " + gn(g, n), std::move(rep));
  }

  auto alpha = compact_support_leaf(g, n, 11);

  auto beta = std::make_shared<Certificate>();
  beta->claim = {"beta-injective", g, n, 11};
  beta->rule = rule::kBetaRank;
  Json group_dims = Json::array();
  std::vector<ratlin::SparseMat> mats;
  std::vector<std::string> paths;
  const std::string stem = report_stem(g, n);
  if (rep.matrix) {
    mats.push_back(std::move(*rep.matrix));
    paths.push_back("matrices/" + stem + ".txt");
  }
  if (rep.blocks) {
    for (std::size_t i = 0; i < rep.blocks->groups.size(); ++i) {
      auto& b = rep.blocks->groups[i];
      group_dims.push_back(b.dim);
      if (!b.matrix) continue;
      mats.push_back(std::move(*b.matrix));
      paths.push_back("matrices/" + stem + "_group" + std::to_string(i) + ".txt");
      b.matrix.reset();
    }
  }
  rep.matrix.reset();
  Json rj = to_json(rep);
  rj["matrices"] = paths;
  beta->detail = {{"route", rep.route},
                  {"domain_dim", rep.domain_dim},
                  {"rank", rep.rank},
                  {"matrices", paths},
                  {"group_dims", group_dims}};
  if (options.bundle_dir) {
    const fs::path dir(*options.bundle_dir);
    fs::create_directories(dir / "reports");
    fs::create_directories(dir / "matrices");
    for (std::size_t i = 0; i < mats.size(); ++i) ratlin::write_matrix_file((dir / paths[i]).string(), mats[i]);
    beta->report = "reports/" + stem + ".json";
    write_json_file((dir / *beta->report).string(), rj);
  }

  auto root = std::make_shared<Certificate>();
  root->claim = {"vanishing", g, n, 11};
  root->rule = rule::kWeightComplex;
  root->children = {alpha, beta};
  if (base) root->detail["alternative_axiom"] = *base;

  if (!options.bundle_dir && options.keep_in_memory) beta->matrices = std::make_shared<const std::vector<ratlin::SparseMat>>(std::move(mats));
  ledger.set(g, n, VanishingStatus::vanishes({Provenance::Kind::Computed,
                                              beta->report ? *beta->report : "in-memory report " + stem}));
  return root;
}

int sweep_markings_bound(int g, int gmax, int nmax) { return nmax + 2 * (gmax - g); }

namespace {

// Lexicographic sweep over g = 2..gmax with n <= bound(g).
SweepResult run_sweep(int gmax, const std::function<int(int)>& bound, const VerifyOptions& options,
                      const VanishingLedger& initial) {
  SweepResult out;
  out.ledger = initial;
  for (int g = 2; g <= gmax; ++g) {
    const int nb = bound(g);
    for (int n = 0; n <= nb; ++n) {
      if (2 * g - 2 + n <= 0) continue;
      auto base = h11_base_case(g, n);
      if (base && *base == "rationality") {
        try {
          out.certificates.push_back(verify_h11(g, n, out.ledger, options));
          out.events.push_back({g, n, "direct beta computation succeeded; rationality axiom not needed"});
        } catch (const BetaNotInjective& e) {
          out.events.push_back({g, n, std::string("unresolved by computation (") + e.what() +
                                          "); rationality axiom applied"});
          out.ledger.set(g, n, VanishingStatus::vanishes({Provenance::Kind::Axiom, "rationality"}));
          out.certificates.push_back(leaf({"vanishing", g, n, 11}, rule::kAxiom, std::string("rationality"),
                                          {{"computation", "beta not injective"}}));
        }
        continue;
      }
      out.certificates.push_back(verify_h11(g, n, out.ledger, options));
    }
  }
  return out;
}

}  // namespace

SweepResult sweep_h11(int gmax, int nmax, const VerifyOptions& options, const VanishingLedger& initial) {
  if (gmax < 2 || nmax < 2) throw std::invalid_argument("sweep bounds must be >= 2");
  return run_sweep(gmax, [&](int g) { return sweep_markings_bound(g, gmax, nmax); }, options, initial);
}

SweepResult prepare_ledger(int g, int n, const VerifyOptions& options) {
  if (g < 2) return {};
  return run_sweep(g, [&](int gp) { return gp < g ? n + 2 * (g - gp) : n - 1; }, options, {});
}

namespace {

void collect_nodes(const CertPtr& c, std::map<std::string, Json>& nodes) {
  auto h = certificate_hash(*c);
  if (nodes.count(h)) return;
  nodes.emplace(h, node_json(*c));
  for (const auto& ch : c->children) collect_nodes(ch, nodes);
}

}  // namespace

void write_bundle(const std::string& dir, const SweepResult& result) {
  const fs::path root(dir);
  fs::create_directories(root / "certificates");
  std::map<std::string, Json> nodes;
  Json roots = Json::array();
  for (const auto& c : result.certificates) {
    collect_nodes(c, nodes);
    roots.push_back({{"claim", claim_json(c->claim)}, {"hash", certificate_hash(*c)}});
  }
  for (const auto& [h, j] : nodes) write_json_file((root / "certificates" / (h + ".json")).string(), j);
  Json events = Json::array();
  for (const auto& e : result.events) events.push_back({{"g", e.g}, {"n", e.n}, {"message", e.message}});
  Json axioms = Json::array();
  for (const auto& a : axiom_table()) axioms.push_back({{"tag", a.tag}, {"citation", a.citation}});
  Json index{{"schema_version", kSchemaVersion},
             {"kind", "certificate-bundle"},
             {"roots", roots},
             {"ledger", ledger_to_json(result.ledger)},
             {"events", events},
             {"axioms", axioms},
             {"certificate_count", nodes.size()}};
  write_json_file((root / "index.json").string(), index);
}

// ---------------------------------------------------------------------------
// Purity.

namespace {

std::string purity_base_tag(int g) {
  if (g == 0) return "Keel";
  if (g == 1) return "even taut";
  if (g == 2) return "g = 2, n < 20";
  return "CL-CKgP";
}

bool purity_is_base(int g, int n) { return g == 0 || 2 * g - 2 + n <= 12; }

struct Split {
  int g1, n1, g2, n2;
};

// Unordered stable splittings (g1, n1 + 1) x (g2, n2 + 1).
std::vector<Split> splittings(int g, int n) {
  std::vector<Split> out;
  for (int g1 = 0; g1 <= g; ++g1) {
    for (int n1 = 0; n1 <= n; ++n1) {
      int g2 = g - g1, n2 = n - n1;
      if (std::pair(g1, n1) > std::pair(g2, n2)) continue;
      if (2 * g1 - 2 + n1 + 1 <= 0 || 2 * g2 - 2 + n2 + 1 <= 0) continue;
      out.push_back({g1, n1, g2, n2});
    }
  }
  return out;
}

std::vector<Claim> expected_purity_children(int g, int n, int k) {
  std::vector<Claim> out{{"hc-vanishing", g, n, k}};
  auto sp = splittings(g, n);
  if (!sp.empty()) out.push_back({"odd-vanishing", g, n, k / 2});
  out.push_back({"purity", g - 1, n + 2, k});
  for (const auto& s : sp) {
    for (int i = 0; 2 * i <= k; ++i) {
      out.push_back({"purity", s.g1, s.n1 + 1, 2 * i});
      out.push_back({"purity", s.g2, s.n2 + 1, k - 2 * i});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::mutex g_purity_mu;
std::map<std::tuple<int, int, int>, CertPtr> g_purity_memo;

CertPtr purity_rec(int g, int n, int k) {
  auto key = std::make_tuple(g, n, k);
  if (auto it = g_purity_memo.find(key); it != g_purity_memo.end()) return it->second;
  CertPtr out;
  if (k == 0) {
    out = leaf({"purity", g, n, 0}, rule::kDegreeZero, std::nullopt);
  } else if (purity_is_base(g, n)) {
    out = leaf({"purity", g, n, k}, rule::kAxiom, purity_base_tag(g), {{"scope", "base cases: 2g-2+n <= 12"}});
  } else {
    auto node = std::make_shared<Certificate>();
    node->claim = {"purity", g, n, k};
    node->rule = rule::kBoundaryRecursion;
    std::map<Claim, CertPtr> kids;
    for (const auto& c : expected_purity_children(g, n, k)) {
      if (c.kind == "hc-vanishing") kids[c] = compact_support_leaf(g, n, k);
      else if (c.kind == "odd-vanishing") kids[c] = leaf(c, rule::kAxiom, std::string("odd vanishing"));
      else kids[c] = purity_rec(c.g, c.n, c.k);
    }
    for (auto& [c, p] : kids) node->children.push_back(p);
    Json sp = Json::array();
    for (const auto& s : splittings(g, n)) sp.push_back({s.g1, s.n1 + 1, s.g2, s.n2 + 1});
    node->detail = {{"splittings", sp}};
    out = node;
  }
  g_purity_memo.emplace(key, out);
  return out;
}

}  // namespace

CertPtr purity_certificate(int g, int n, int k) {
  require_stable(g, n);
  if (k < 0 || k > 12 || k % 2 != 0) throw std::invalid_argument("purity degree must be even and <= 12");
  std::lock_guard<std::mutex> lock(g_purity_mu);
  return purity_rec(g, n, k);
}

// ---------------------------------------------------------------------------
// Replay.

namespace {

class Replayer {
 public:
  Replayer(std::optional<std::string> dir, ratlin::RankOptions rank) : dir_(std::move(dir)), rank_(rank) {}

  void visit(const CertPtr& c) {
    if (!seen_.insert(c.get()).second) return;
    ++result.nodes;
    try {
      check(*c);
    } catch (const std::exception& e) {
      fail(*c, std::string("exception: ") + e.what());
    }
    for (const auto& ch : c->children) visit(ch);
  }

  ReplayResult result;

 private:
  void fail(const Certificate& c, const std::string& msg) {
    result.ok = false;
    result.errors.push_back(c.claim.kind + " " + gn(c.claim.g, c.claim.n) + " k=" + std::to_string(c.claim.k) +
                            " [" + c.rule + "]: " + msg);
  }

  void check(const Certificate& c) {
    const auto& cl = c.claim;
    if (c.rule == rule::kAxiom) {
      if (!c.children.empty()) return fail(c, "axiom leaf has children");
      if (!c.axiom || !is_axiom(*c.axiom)) return fail(c, "unknown axiom");
      std::string expect;
      if (cl.kind == "vanishing") {
        auto b = h11_base_case(cl.g, cl.n);
        if (!b) return fail(c, "not a base case");
        expect = *b;
      } else if (cl.kind == "purity") {
        if (!purity_is_base(cl.g, cl.n)) return fail(c, "outside the purity base range");
        expect = purity_base_tag(cl.g);
      } else if (cl.kind == "odd-vanishing") {
        if (cl.k > 6) return fail(c, "odd vanishing cited beyond degree 6");
        expect = "odd vanishing";
      } else {
        return fail(c, "claim kind cannot rest on an axiom");
      }
      if (*c.axiom != expect) fail(c, "axiom " + *c.axiom + " does not cover the claim (expected " + expect + ")");
    } else if (c.rule == rule::kCompactSupport) {
      if (cl.kind != "hc-vanishing" || !c.children.empty()) return fail(c, "malformed compact-support leaf");
      if (!hc_vanishes(cl.g, cl.n, cl.k)) fail(c, "compact-support bound does not hold");
    } else if (c.rule == rule::kDegreeZero) {
      if (cl.kind != "purity" || cl.k != 0 || !c.children.empty()) fail(c, "malformed degree-zero leaf");
    } else if (c.rule == rule::kWeightComplex) {
      if (cl.kind != "vanishing" || cl.k != 11 || cl.g < 2) return fail(c, "malformed vanishing claim");
      if (c.children.size() != 2) return fail(c, "expects two children");
      if (c.children[0]->claim != Claim{"hc-vanishing", cl.g, cl.n, 11}) fail(c, "first child must be the alpha bound");
      if (c.children[1]->claim != Claim{"beta-injective", cl.g, cl.n, 11}) fail(c, "second child must be beta");
      if (c.children[0]->rule != rule::kCompactSupport || c.children[1]->rule != rule::kBetaRank)
        fail(c, "children use the wrong rules");
    } else if (c.rule == rule::kBetaRank) {
      check_beta(c);
    } else if (c.rule == rule::kBoundaryRecursion) {
      if (cl.kind != "purity") return fail(c, "recursion is for purity claims");
      std::vector<Claim> got;
      for (const auto& ch : c.children) {
        got.push_back(ch->claim);
        if (ch->claim.kind == "purity" && std::pair(ch->claim.g, ch->claim.n) >= std::pair(cl.g, cl.n))
          fail(c, "child " + gn(ch->claim.g, ch->claim.n) + " does not decrease (g, n)");
      }
      std::sort(got.begin(), got.end());
      if (got != expected_purity_children(cl.g, cl.n, cl.k)) fail(c, "children do not match the boundary");
    } else {
      fail(c, "unknown rule " + c.rule);
    }
  }

  void check_beta(const Certificate& c) {
    const auto& d = c.detail;
    const std::size_t domain_dim = d.at("domain_dim");
    const std::size_t claimed = d.at("rank");
    if (claimed != domain_dim) fail(c, "recorded rank is below the domain dimension");
    std::vector<ratlin::SparseMat> mats;
    std::shared_ptr<const std::vector<ratlin::SparseMat>> mem;
    if (dir_) {
      for (const auto& p : d.at("matrices")) mats.push_back(ratlin::read_matrix_file((fs::path(*dir_) / p.get<std::string>()).string()));
      if (c.report) {
        Json rj = read_json_file((fs::path(*dir_) / *c.report).string());
        if (rj.at("rank") != claimed || rj.at("domain_dim") != domain_dim || rj.at("injective") != true)
          fail(c, "report disagrees with the certificate");
      } else {
        fail(c, "missing report reference");
      }
    } else {
      if (!c.matrices) return fail(c, "no stored matrices for this computed leaf");
      mem = c.matrices;
    }
    const auto& use = dir_ ? mats : *mem;
    const std::string route = d.at("route");
    if (route == "direct") {
      if (domain_dim == 0) {
        if (!use.empty() && use.front().cols() != 0) fail(c, "empty domain with nonempty matrix");
        return;
      }
      if (use.size() != 1) return fail(c, "direct route expects one matrix");
      if (use[0].cols() != domain_dim) fail(c, "matrix width differs from the domain dimension");
      ++result.rank_checks;
      if (ratlin::rank(use[0], rank_) != domain_dim) fail(c, "stored matrix is not injective");
    } else {
      std::size_t total = 0;
      for (const auto& m : use) {
        total += m.cols();
        ++result.rank_checks;
        if (ratlin::rank(m, rank_) != m.cols()) fail(c, "diagonal block is not injective");
      }
      std::size_t groups = 0;
      for (const auto& x : d.at("group_dims")) groups += x.get<std::size_t>();
      if (total != domain_dim || groups != domain_dim) fail(c, "diagonal blocks do not cover the domain");
    }
  }

  std::optional<std::string> dir_;
  ratlin::RankOptions rank_;
  std::set<const Certificate*> seen_;
};

}  // namespace

ReplayResult replay(const CertPtr& root, const std::optional<std::string>& bundle_dir,
                    const ratlin::RankOptions& rank) {
  Replayer r(bundle_dir, rank);
  r.visit(root);
  return r.result;
}

CertPtr load_certificate(const std::string& dir, const std::string& hash) {
  std::map<std::string, CertPtr> memo;
  std::function<CertPtr(const std::string&)> load = [&](const std::string& h) -> CertPtr {
    if (auto it = memo.find(h); it != memo.end()) return it->second;
    Json j = read_json_file((fs::path(dir) / "certificates" / (h + ".json")).string());
    auto c = std::make_shared<Certificate>();
    c->claim = claim_from(j.at("claim"));
    c->rule = j.at("rule");
    if (!j.at("axiom").is_null()) c->axiom = j.at("axiom").get<std::string>();
    if (!j.at("report").is_null()) c->report = j.at("report").get<std::string>();
    c->detail = j.at("detail");
    for (const auto& ch : j.at("children")) c->children.push_back(load(ch.get<std::string>()));
    if (certificate_hash(*c) != h) throw std::runtime_error("certificate " + h + " does not match its hash");
    memo.emplace(h, c);
    return c;
  };
  return load(hash);
}

ReplayResult replay_bundle(const std::string& dir, const ratlin::RankOptions& rank) {
  Json index = read_json_file((fs::path(dir) / "index.json").string());
  Replayer r(dir, rank);
  std::vector<CertPtr> alive;  // keeps node addresses unique while visiting
  for (const auto& root : index.at("roots")) {
    CertPtr c;
    try {
      c = load_certificate(dir, root.at("hash"));
    } catch (const std::exception& e) {
      r.result.ok = false;
      r.result.errors.push_back(e.what());
      continue;
    }
    if (c->claim != claim_from(root.at("claim"))) {
      r.result.ok = false;
      r.result.errors.push_back("index claim mismatch for " + root.at("hash").get<std::string>());
    }
    alive.push_back(c);
    r.visit(c);
  }
  return r.result;
}

}  // namespace w11::certify
