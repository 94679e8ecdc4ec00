#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include "oracles.hpp"
#include "w11/certify.hpp"

using namespace w11;
using namespace w11::certify;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("w11_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

void walk(const CertPtr& c, const std::function<void(const Certificate&)>& f) {
  std::set<const Certificate*> seen;
  std::function<void(const CertPtr&)> rec = [&](const CertPtr& x) {
    if (!seen.insert(x.get()).second) return;
    f(*x);
    for (const auto& ch : x->children) rec(ch);
  };
  rec(c);
}

}  // namespace

TEST(CertifyCompactSupport, Examples) {
  EXPECT_TRUE(hc_vanishes(2, 12, 11));
  EXPECT_FALSE(hc_vanishes(1, 11, 11));
  EXPECT_TRUE(hc_vanishes(6, 0, 11));
  EXPECT_FALSE(hc_vanishes(5, 1, 10));
  EXPECT_TRUE(hc_vanishes(5, 1, 9));
  EXPECT_THROW(hc_vanishes(0, 5, 1), std::invalid_argument);
  EXPECT_THROW(hc_vanishes(1, 0, 1), std::invalid_argument);
}

TEST(CertifyBaseCase, Examples) {
  EXPECT_EQ(h11_base_case(3, 5), "CL-CKgP");
  EXPECT_EQ(h11_base_case(2, 9), "CL-CKgP");
  EXPECT_EQ(h11_base_case(2, 10), "rationality");
  EXPECT_EQ(h11_base_case(2, 11), "rationality");
  EXPECT_EQ(h11_base_case(1, 12), std::nullopt);
  EXPECT_EQ(h11_base_case(1, 10), "genus-1 formula");
  EXPECT_EQ(h11_base_case(0, 20), "Keel");
  EXPECT_EQ(h11_base_case(2, 12), std::nullopt);
  for (const auto& a : axiom_table()) {
    EXPECT_FALSE(a.citation.empty());
    EXPECT_TRUE(is_axiom(a.tag));
  }
  EXPECT_FALSE(is_axiom("made up"));
}

TEST(CertifyVerify, GenusTwoTwelve) {
  VanishingLedger ledger = prepare_ledger(2, 12).ledger;
  EXPECT_TRUE(ledger.status(2, 12).is_unknown());
  auto cert = verify_h11(2, 12, ledger);
  EXPECT_EQ(cert->rule, rule::kWeightComplex);
  ASSERT_EQ(cert->children.size(), 2u);
  EXPECT_EQ(cert->children[0]->rule, rule::kCompactSupport);
  EXPECT_EQ(cert->children[1]->rule, rule::kBetaRank);
  EXPECT_EQ(cert->children[1]->detail.at("rank"), 330);
  auto st = ledger.status(2, 12);
  EXPECT_TRUE(st.is_vanishes());
  EXPECT_EQ(st.provenance.kind, Provenance::Kind::Computed);
  auto r = replay(cert);
  EXPECT_TRUE(r.ok);
  EXPECT_GE(r.rank_checks, 1u);
}

TEST(CertifyVerify, BaseAndEmptyDomain) {
  VanishingLedger ledger;
  auto c = verify_h11(2, 9, ledger);
  EXPECT_EQ(c->rule, rule::kAxiom);
  EXPECT_EQ(c->axiom, "CL-CKgP");
  VanishingLedger l38 = prepare_ledger(3, 8).ledger;
  auto c38 = verify_h11(3, 8, l38);
  EXPECT_EQ(c38->rule, rule::kWeightComplex);
  EXPECT_EQ(c38->children[1]->detail.at("domain_dim"), 0);
  EXPECT_TRUE(replay(c38).ok);
}

TEST(CertifyVerify, MissingPrerequisite) {
  VanishingLedger ledger;
  EXPECT_THROW(verify_h11(2, 12, ledger), PrerequisiteUnknown);
  EXPECT_TRUE(ledger.status(2, 12).is_unknown());
  EXPECT_FALSE(ledger.frontier());
}

TEST(CertifyLedger, FrontierAndMonotonicity) {
  VanishingLedger ledger;
  ledger.set(2, 5, VanishingStatus::vanishes({Provenance::Kind::Axiom, "CL-CKgP"}));
  ledger.set_frontier({{2, 5}});
  EXPECT_THROW(ledger.status(2, 5), FrontierViolation);
  EXPECT_THROW(ledger.status(3, 0), FrontierViolation);
  EXPECT_NO_THROW(ledger.status(2, 4));
  EXPECT_NO_THROW(ledger.status(1, 40));
  ledger.set_frontier(std::nullopt);
  EXPECT_THROW(ledger.set(2, 5, VanishingStatus::unknown()), std::logic_error);
  EXPECT_THROW(ledger.set(2, 5, VanishingStatus::nonzero(3)), std::logic_error);
  EXPECT_EQ(ledger.status(1, 13).kind, VanishingStatus::Kind::Nonzero);
  EXPECT_EQ(ledger.status(1, 13).dimension, 66u);
  EXPECT_TRUE(ledger.status(1, 10).is_vanishes());
  EXPECT_TRUE(ledger.status(0, 9).is_vanishes());
}

TEST(CertifySweep, ThreeTwelve) {
  auto res = sweep_h11(3, 12);
  for (const auto& [gn, st] : res.ledger.entries())
    if (gn.first >= 2) EXPECT_TRUE(st.is_vanishes()) << gn.first << "," << gn.second;
  for (int g = 2; g <= 3; ++g)
    for (int n = 0; n <= sweep_markings_bound(g, 3, 12); ++n)
      if (2 * g - 2 + n > 0) EXPECT_TRUE(res.ledger.status(g, n).is_vanishes()) << g << "," << n;
  for (int n = 11; n <= 16; ++n)
    EXPECT_EQ(oracle::Z(static_cast<unsigned long>(res.ledger.status(1, n).dimension)), oracle::binom(n - 1, 10));
  for (const auto& c : res.certificates) EXPECT_TRUE(replay(c).ok);
  // (2, 10) and (2, 11) go through the computation.
  std::size_t computed = 0;
  for (const auto& e : res.events) computed += e.message.find("succeeded") != std::string::npos;
  EXPECT_EQ(computed, 2u);

  // Replaying over the saved ledger changes nothing.
  auto again = sweep_h11(3, 12, {}, res.ledger);
  EXPECT_EQ(again.ledger, res.ledger);
  EXPECT_EQ(ledger_from_json(ledger_to_json(res.ledger)), res.ledger);
}

TEST(CertifySweep, LevelOneAlphabetsReachFourteenMarks) {
  VanishingLedger ledger = prepare_ledger(2, 12).ledger;
  std::size_t widest = 0;
  for (const auto& s : complex11::build_term(2, 12, 1, ledger).summands)
    for (const auto& v : s.data.basis.summands) widest = std::max(widest, v.alphabet.size());
  EXPECT_EQ(widest, 14u);
}

TEST(CertifyBundle, WriteAndReplay) {
  fs::path dir = scratch("bundle");
  VerifyOptions opts;
  opts.bundle_dir = dir.string();
  auto res = sweep_h11(2, 12, opts);
  write_bundle(dir.string(), res);
  EXPECT_TRUE(fs::exists(dir / "index.json"));
  EXPECT_TRUE(fs::exists(dir / "reports" / "beta_g2_n12.json"));
  EXPECT_TRUE(fs::exists(dir / "matrices" / "beta_g2_n12.txt"));
  auto r = replay_bundle(dir.string());
  EXPECT_TRUE(r.ok);
  EXPECT_GE(r.rank_checks, 3u);
  std::string h = certificate_hash(*res.certificates.back());
  auto back = load_certificate(dir.string(), h);
  EXPECT_EQ(certificate_hash(*back), h);
  EXPECT_EQ(tree_json(*back), tree_json(*res.certificates.back()));

  // A corrupted matrix is caught by the replay.
  {
    std::ofstream out(dir / "matrices" / "beta_g2_n12.txt");
    out << "%%sparse-rational rows=4752 cols=330\n";
  }
  EXPECT_FALSE(replay_bundle(dir.string()).ok);
  fs::remove_all(dir);
}

TEST(CertifyReplay, RejectsMalformedNodes) {
  auto bad = std::make_shared<Certificate>();
  bad->claim = {"vanishing", 1, 12, 11};
  bad->rule = rule::kAxiom;
  bad->axiom = "Keel";
  EXPECT_FALSE(replay(bad).ok);

  auto wrong_hc = std::make_shared<Certificate>();
  wrong_hc->claim = {"hc-vanishing", 1, 11, 11};
  wrong_hc->rule = rule::kCompactSupport;
  EXPECT_FALSE(replay(wrong_hc).ok);

  auto unknown_rule = std::make_shared<Certificate>();
  unknown_rule->claim = {"purity", 2, 2, 4};
  unknown_rule->rule = "intuition";
  EXPECT_FALSE(replay(unknown_rule).ok);
}

TEST(CertifyPurity, Examples) {
  auto leaf = purity_certificate(2, 2, 4);
  EXPECT_EQ(leaf->rule, rule::kAxiom);
  EXPECT_TRUE(leaf->children.empty());
  EXPECT_EQ(purity_certificate(7, 3, 0)->rule, rule::kDegreeZero);
  auto big = purity_certificate(5, 6, 12);
  EXPECT_EQ(big->rule, rule::kBoundaryRecursion);
  std::size_t nodes = 0;
  walk(big, [&](const Certificate& c) {
    ++nodes;
    if (c.children.empty()) {
      EXPECT_TRUE(c.rule == rule::kAxiom || c.rule == rule::kCompactSupport || c.rule == rule::kDegreeZero) << c.rule;
      if (c.rule == rule::kAxiom) EXPECT_TRUE(c.axiom && is_axiom(*c.axiom));
    }
  });
  EXPECT_GT(nodes, 10u);
  EXPECT_TRUE(replay(big).ok);
  EXPECT_THROW(purity_certificate(2, 2, 3), std::invalid_argument);
  EXPECT_THROW(purity_certificate(2, 2, 14), std::invalid_argument);
}

TEST(CertifyPurity, ChildrenDecreaseLexicographically) {
  for (int g = 0; g <= 21; ++g)
    for (int n = 0; 2 * g - 2 + n <= 40; ++n) {
      if (2 * g - 2 + n <= 0) continue;
      for (int k = 0; k <= 12; k += 2) {
        auto c = purity_certificate(g, n, k);
        if (c->rule != rule::kBoundaryRecursion) continue;
        for (const auto& ch : c->children) {
          if (ch->claim.kind != "purity") continue;
          EXPECT_LT(std::pair(ch->claim.g, ch->claim.n), std::pair(g, n));
        }
      }
    }
}

TEST(CertifyHash, ContentAddressed) {
  auto a = purity_certificate(4, 6, 8);
  auto b = purity_certificate(4, 6, 8);
  EXPECT_EQ(a, b);  // memoized
  std::string h = certificate_hash(*a);
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(node_json(*a).at("children").size(), a->children.size());
  Certificate copy = *a;
  copy.detail["note"] = "changed";
  EXPECT_NE(certificate_hash(copy), h);
}
