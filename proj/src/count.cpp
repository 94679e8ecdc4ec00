#include "w11/count.hpp"

#include <stdexcept>

#include "w11/graphs.hpp"
#include "w11/parallel.hpp"

namespace w11::count {

void BettiTable::validate() const {
  if (h[0] != 1) throw std::invalid_argument("h^0 must be 1");
  for (const auto& x : h)
    if (x < 0) throw std::invalid_argument("Betti numbers must be nonnegative");
  for (int i = 0; i <= 6; ++i)
    if (h[i] != 0 && d - i < 0)
      throw std::invalid_argument("h^" + std::to_string(2 * i) + " is nonzero above the dimension");
}

Integer approx_count(const BettiTable& t, const Integer& q) {
  t.validate();
  if (q < 1) throw std::invalid_argument("q must be positive");
  Integer total = 0;
  for (int i = 0; i <= 6; ++i) {
    if (t.h[i] == 0) continue;
    Integer p;
    mpz_pow_ui(p.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(t.d - i));
    total += t.h[i] * p;
  }
  return total;
}

std::vector<Integer> tau_expansion(int N) {
  if (N < 1) throw std::invalid_argument("tau expansion needs N >= 1");
  // prod_{k=1}^{N-1} (1 - q^k)^24 mod q^N; tau(i+1) is its q^i coefficient.
  std::vector<Integer> c(N, 0);
  c[0] = 1;
  for (int k = 1; k < N; ++k) {
    for (int rep = 0; rep < 24; ++rep) {
      for (int i = N - 1; i >= k; --i) c[i] -= c[i - k];
    }
  }
  return c;
}

OpenCount m0_open_count(int n, const Integer& q) {
  if (n < 3) throw std::invalid_argument("M_{0,n} needs n >= 3");
  OpenCount out{1, q < n - 1};
  for (int i = 2; i <= n - 2; ++i) out.value *= q - i;
  return out;
}

Integer m0bar_count(int n, const Integer& q, unsigned threads) {
  auto trees = graphs::enumerate_stable_trees(n);
  std::vector<Integer> terms(trees.size());
  parallel_for(trees.size(), threads, [&](std::size_t i) {
    Integer p = 1;
    for (int v = 0; v < trees[i].num_vertices(); ++v) p *= m0_open_count(trees[i].valence(v), q).value;
    terms[i] = p;
  });
  Integer total = 0;
  for (const auto& t : terms) total += t;
  return total;
}

Genus1Deviation genus1_deviation(int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  Genus1Deviation out;
  out.multiplicity = n >= 11 ? binomial(n - 1, 10) : Integer(0);
  const std::string m = out.multiplicity.get_str();
  out.description = "#Mbar_{1," + std::to_string(n) + "}(F_q) differs from its polynomial approximant by -" + m +
                    " * tau(q), up to O(q^{" + std::to_string(n) + " - 13/2})";
  if (out.multiplicity == 0) out.description += "; the correction vanishes for n <= 10";
  return out;
}

std::vector<Integer> s12_multiplicity_series(int N) {
  if (N < 1) throw std::invalid_argument("series bound must be positive");
  // Truncated series in x (degree <= N) and y (degree <= 10), rational
  // coefficients: s[m][j] is the coefficient of x^m y^j.
  std::vector<std::vector<Rational>> s(N + 1, std::vector<Rational>(11, 0));
  std::vector<Rational> pw(11, 0);  // (1+y)^{m-1}, truncated
  pw[0] = 1;
  Integer fact = 1;
  for (int m = 1; m <= N; ++m) {
    fact *= m;
    if (m >= 2) {
      for (int j = 10; j >= 1; --j) pw[j] += pw[j - 1];
    }
    for (int j = 0; j <= 10; ++j) s[m][j] += pw[j] / Rational(fact);
  }
  std::vector<Integer> c(N + 1, 0);
  Integer nf = 1;
  for (int n = 1; n <= N; ++n) {
    nf *= n;
    Rational v = s[n][10] * Rational(nf);
    if (v.get_den() != 1) throw std::logic_error("non-integral multiplicity");
    c[n] = v.get_num();
  }
  return c;
}

}  // namespace w11::count
