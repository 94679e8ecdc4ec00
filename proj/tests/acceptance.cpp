// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "w11/certify.hpp"
#include "w11/complex11.hpp"
#include "w11/count.hpp"
#include "w11/h11.hpp"
#include "w11/parallel.hpp"
#include "w11/serialize.hpp"
#include "w11/specht.hpp"

using namespace w11;
using specht::Alphabet;
using specht::H11Vector;
using specht::Mark;
using specht::OrderedTuple;

namespace {

// Wall-clock limits in seconds.
constexpr double kLimitDims = 30;
constexpr double kLimitAlpha = 120;
constexpr double kLimitComposite = 300;
constexpr double kLimitBeta212 = 600;
constexpr double kLimitBetaEach = 1800;
constexpr double kLimitBlocks = 600;
constexpr double kLimitPurity = 60;
constexpr double kLimitSpecht = 60;
constexpr double kLimitCounts = 120;
constexpr double kLimitDeterminism = 3600;

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    pass = false;
    detail += (detail.empty() ? "" : "; ") + why;
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::size_t binom(int n, int k) { return oracle::binom(n, k).get_ui(); }

// ---------------------------------------------------------------------------

Outcome dimensions() {
  Outcome o;
  auto series = count::s12_multiplicity_series(16);
  for (int m = 11; m <= 16; ++m) {
    Alphabet al = specht::leg_alphabet(m);
    std::vector<ratlin::Triplet> t;
    std::size_t col = 0;
    for (specht::Mask s = 0; s < (specht::Mask{1} << m); ++s) {
      if (std::popcount(s) != 11) continue;
      OrderedTuple a;
      for (int p = 0; p < m; ++p)
        if (s >> p & 1u) a.push_back(al[p]);
      for (const auto& [k, x] : specht::omega(a, al).coeffs) t.push_back({specht::colex_rank(k), col, x});
      ++col;
    }
    const std::size_t span = ratlin::rank(ratlin::SparseMat(specht::binom64(m, 10), col, t));
    const std::size_t gens = specht::standard_generators(al).size();
    const std::size_t want = binom(m - 1, 10);
    if (span != want || gens != want || specht::generator_count(m) != want || series[m] != Integer(want))
      o.fail("n=" + std::to_string(m) + ": span " + std::to_string(span) + ", generators " + std::to_string(gens) +
             ", series " + series[m].get_str() + ", expected " + std::to_string(want));
  }
  if (o.pass) o.note("n=11..16 all equal binom(n-1,10)");
  return o;
}

Outcome alpha_injective() {
  Outcome o;
  VanishingLedger ledger;
  for (int n = 11; n <= 15; ++n) {
    auto a = complex11::build_alpha(n, ledger);
    const std::size_t r = ratlin::rank(a);
    const std::size_t want = binom(n - 1, 10);
    std::ostringstream s;
    s << "n=" << n << " " << a.rows() << "x" << a.cols() << " rank " << r;
    if (r != want) o.fail(s.str() + " (expected " + std::to_string(want) + ")");
    else o.note(s.str());
  }
  return o;
}

Outcome composite_zero() {
  Outcome o;
  VanishingLedger ledger;
  for (int n = 11; n <= 14; ++n)
    if (!complex11::check_beta_alpha_zero(n, ledger)) o.fail("nonzero product at n=" + std::to_string(n));
  if (o.pass) o.note("n=11..14 exact zero");
  return o;
}

std::size_t level1_dim_212() {
  // 66 from the loop graph, binom(12,a) binom(a,10) from splittings.
  oracle::Z d = 66;
  for (int a = 10; a <= 12; ++a) d += oracle::binom(12, a) * oracle::binom(a, 10);
  return d.get_ui();
}

Outcome beta_212() {
  Outcome o;
  auto ledger = certify::prepare_ledger(2, 12).ledger;
  complex11::Options opt;
  opt.rank.modular_precheck = true;
  auto r = complex11::check_beta_injective(2, 12, ledger, opt);
  if (r.domain_dim != level1_dim_212()) o.fail("domain_dim " + std::to_string(r.domain_dim));
  if (!r.injective) o.fail("not injective, rank " + std::to_string(r.rank));
  o.note("domain 330, rank " + std::to_string(r.rank) + ", route " + r.route);
  return o;
}

Outcome beta_more_and_sweep() {
  Outcome o;
  for (auto [g, n] : {std::pair(2, 13), std::pair(3, 10)}) {
    const auto t0 = std::chrono::steady_clock::now();
    auto ledger = certify::prepare_ledger(g, n).ledger;
    auto r = complex11::check_beta_injective(g, n, ledger);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream msg;
    msg << "(" << g << "," << n << ") domain " << r.domain_dim << " rank " << r.rank << " in " << s << "s";
    if (!r.injective) o.fail(msg.str() + " not injective");
    else if (s > kLimitBetaEach) o.fail(msg.str() + " over time");
    else o.note(msg.str());
  }
  auto sw = certify::sweep_h11(3, 13);
  std::size_t entries = 0;
  for (const auto& [gn, st] : sw.ledger.entries()) {
    ++entries;
    if (gn.first >= 2 && !st.is_vanishes())
      o.fail("sweep entry (" + std::to_string(gn.first) + "," + std::to_string(gn.second) + ") not vanishing");
  }
  for (const auto& c : sw.certificates)
    if (!certify::replay(c).ok) o.fail("certificate replay failed");
  o.note("sweep(3,13): " + std::to_string(entries) + " genus>=2 entries vanish");
  return o;
}

Outcome blocks_212() {
  Outcome o;
  auto ledger = certify::prepare_ledger(2, 12).ledger;
  auto rep = complex11::block_order(2, 12, ledger, {}, true);
  if (rep.groups.size() != 3) o.fail("expected 3 groups, got " + std::to_string(rep.groups.size()));
  if (!rep.triangular || !rep.summand_triangular) o.fail("not block upper triangular");
  if (!rep.exact_zero_check || !*rep.exact_zero_check) o.fail("off-diagonal zero check failed");
  if (!rep.all_injective()) o.fail("a diagonal block is not injective");
  std::string dims;
  for (const auto& g : rep.groups) dims += (dims.empty() ? "" : "/") + std::to_string(g.dim);
  o.note("groups " + dims);
  return o;
}

Outcome purity() {
  Outcome o;
  std::size_t claims = 0, nodes = 0;
  std::set<const certify::Certificate*> seen;
  for (int g = 0; g <= 11; ++g)
    for (int n = 0; 2 * g - 2 + n <= 20; ++n) {
      if (2 * g - 2 + n <= 0) continue;
      for (int k = 0; k <= 12; k += 2) {
        auto c = certify::purity_certificate(g, n, k);
        ++claims;
        std::function<void(const certify::CertPtr&)> walk = [&](const certify::CertPtr& x) {
          if (!seen.insert(x.get()).second) return;
          ++nodes;
          if (x->children.empty()) {
            const bool ok = (x->rule == certify::rule::kAxiom && x->axiom && certify::is_axiom(*x->axiom)) ||
                            x->rule == certify::rule::kCompactSupport || x->rule == certify::rule::kDegreeZero;
            if (!ok) o.fail("bad leaf rule " + x->rule);
          }
          for (const auto& ch : x->children) walk(ch);
        };
        walk(c);
        auto r = certify::replay(c);
        if (!r.ok) o.fail("replay failed at (" + std::to_string(g) + "," + std::to_string(n) + "," + std::to_string(k) + ")");
      }
    }
  o.note(std::to_string(claims) + " claims, " + std::to_string(nodes) + " distinct nodes");
  return o;
}

// --- Specht properties -----------------------------------------------------

int inversion_sign(const std::vector<Mark>& v) {
  int inv = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) inv += v[j] < v[i];
  return inv % 2 ? -1 : 1;
}

Alphabet mixed_alphabet(int legs, int nodes) {
  Alphabet a = specht::leg_alphabet(legs);
  for (int e = 0; e < nodes; ++e) a.push_back(Mark::node(e / 2, e % 2));
  return a;
}

OrderedTuple random_tuple(std::mt19937_64& rng, const Alphabet& al, std::size_t k) {
  OrderedTuple a = al;
  std::shuffle(a.begin(), a.end(), rng);
  a.resize(k);
  return a;
}

Outcome specht_properties() {
  Outcome o;
  std::mt19937_64 rng(8);
  std::size_t bad = 0;
  for (int t = 0; t < 1000; ++t) {
    int m = std::uniform_int_distribution<int>(11, 16)(rng);
    Alphabet al = mixed_alphabet(m - 2, 2);
    OrderedTuple a = random_tuple(rng, al, 11);
    std::vector<int> perm(11);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    OrderedTuple b(11);
    for (int i = 0; i < 11; ++i) b[i] = a[perm[i]];
    if (specht::omega(b, al) != Rational(inversion_sign(b) * inversion_sign(a)) * specht::omega(a, al)) ++bad;
  }
  if (bad) o.fail(std::to_string(bad) + " sign equivariance failures");

  bad = 0;
  for (int t = 0; t < 500; ++t) {
    int m = std::uniform_int_distribution<int>(12, 16)(rng);
    Alphabet al = mixed_alphabet(m - 3, 3);
    OrderedTuple c = random_tuple(rng, al, 12);
    H11Vector sum{al, {}};
    for (int j = 0; j < 12; ++j) {
      OrderedTuple rest;
      for (int i = 0; i < 12; ++i)
        if (i != j) rest.push_back(c[i]);
      sum = sum + Rational(j % 2 ? -1 : 1) * specht::omega(rest, al);
    }
    if (!sum.is_zero()) ++bad;
  }
  if (bad) o.fail(std::to_string(bad) + " twelve-term failures");

  bad = 0;
  std::size_t done = 0;
  while (done < 500) {
    int m = std::uniform_int_distribution<int>(12, 15)(rng);
    Alphabet al = mixed_alphabet(m - 2, 2);
    int bsize = std::uniform_int_distribution<int>(10, m - 2)(rng);
    std::vector<Mark> b = random_tuple(rng, al, bsize);
    std::sort(b.begin(), b.end());
    std::vector<Mark> in_b = b, out_b;
    for (const auto& x : al)
      if (!std::binary_search(b.begin(), b.end(), x)) out_b.push_back(x);
    // At most 9 marks of A inside B.
    const int min_out = 2, max_out = std::min<int>(11, out_b.size());
    if (max_out < min_out) continue;
    int outside = std::uniform_int_distribution<int>(min_out, max_out)(rng);
    if (11 - outside > static_cast<int>(in_b.size())) continue;
    std::shuffle(in_b.begin(), in_b.end(), rng);
    std::shuffle(out_b.begin(), out_b.end(), rng);
    OrderedTuple a(in_b.begin(), in_b.begin() + (11 - outside));
    a.insert(a.end(), out_b.begin(), out_b.begin() + outside);
    std::shuffle(a.begin(), a.end(), rng);
    if (!h11::res(specht::omega(a, al), b, Mark::node(7, 0)).is_zero()) ++bad;
    ++done;
  }
  if (bad) o.fail(std::to_string(bad) + " restriction failures");
  if (o.pass) o.note("1000 sign, 500 twelve-term, 500 restriction instances");
  return o;
}

Outcome point_counts() {
  Outcome o;
  for (int n = 3; n <= 6; ++n)
    for (int p : {5, 7, 11})
      if (count::m0bar_count(n, p) != oracle::m0bar_bruteforce(n, p))
        o.fail("brute force mismatch n=" + std::to_string(n) + " q=" + std::to_string(p));
  for (int n = 4; n <= 8; ++n) {
    std::vector<oracle::Q> xs, ys;
    for (int i = 0; i <= n - 3; ++i) {
      xs.emplace_back(n + 2 * i);
      ys.emplace_back(count::m0bar_count(n, n + 2 * i));
    }
    auto c = oracle::interpolate(xs, ys);
    for (long q : {3, 4, 27, 32})
      if (oracle::eval_poly(c, q) != oracle::Q(count::m0bar_count(n, q)))
        o.fail("interpolation mismatch n=" + std::to_string(n) + " q=" + std::to_string(q));
  }
  auto tau = count::tau_expansion(50);
  for (int n = 1; n <= 50; ++n) {
    oracle::Z r = (tau[n - 1] - oracle::sigma11(n)) % 691;
    if (r != 0) o.fail("congruence fails at n=" + std::to_string(n));
  }
  if (o.pass) o.note("brute force n<=6, interpolation n<=8, congruence n<=50");
  return o;
}

// Serialized matrices, ranks and reports from criteria 4 and 5.
std::string fingerprint(unsigned threads) {
  std::ostringstream out;
  complex11::Options opt;
  opt.threads = threads;
  for (auto [g, n] : {std::pair(2, 12), std::pair(2, 13), std::pair(3, 10)}) {
    certify::VerifyOptions vopt;
    vopt.complex = opt;
    auto ledger = certify::prepare_ledger(g, n, vopt).ledger;
    auto r = complex11::check_beta_injective(g, n, ledger, opt, true);
    if (r.matrix) ratlin::write_matrix(out, *r.matrix);
    if (r.blocks)
      for (const auto& grp : r.blocks->groups)
        if (grp.matrix) ratlin::write_matrix(out, *grp.matrix);
    auto m = r.matrix;
    r.matrix.reset();
    out << to_json(r).dump() << '\n';
    if (m) out << "rank " << ratlin::rank(*m) << '\n';
  }
  certify::VerifyOptions vopt;
  vopt.complex = opt;
  auto sw = certify::sweep_h11(3, 13, vopt);
  out << ledger_to_json(sw.ledger).dump() << '\n';
  for (const auto& c : sw.certificates) out << certify::certificate_hash(*c) << '\n';
  return out.str();
}

Outcome determinism() {
  Outcome o;
  std::vector<unsigned> counts{1, 4, hardware_threads()};
  const std::string base = fingerprint(counts[0]);
  for (std::size_t i = 1; i < counts.size(); ++i)
    if (fingerprint(counts[i]) != base) o.fail("threads=" + std::to_string(counts[i]) + " differs from threads=1");
  o.note("threads 1, 4, " + std::to_string(counts[2]) + "; " + std::to_string(base.size()) + " bytes compared");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "dimension triple-check", kLimitDims, dimensions},
      {2, "alpha injectivity n=11..15", kLimitAlpha, alpha_injective},
      {3, "beta o alpha = 0, n=11..14", kLimitComposite, composite_zero},
      {4, "beta injective (2,12)", kLimitBeta212, beta_212},
      {5, "beta injective (2,13), (3,10); sweep(3,13)", 2 * kLimitBetaEach + kLimitBeta212, beta_more_and_sweep},
      {6, "block order (2,12)", kLimitBlocks, blocks_212},
      {7, "purity certificates 2g-2+n<=20", kLimitPurity, purity},
      {8, "Specht property suite", kLimitSpecht, specht_properties},
      {9, "point counts", kLimitCounts, point_counts},
      {10, "determinism across thread counts", kLimitDeterminism, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s > c.limit) o.fail("exceeded " + std::to_string(static_cast<int>(c.limit)) + "s");
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s: %s (%.1fs) %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, s, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
