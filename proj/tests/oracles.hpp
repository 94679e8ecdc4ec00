#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's linear algebra.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Q = mpq_class;
using Z = mpz_class;
using Dense = std::vector<std::vector<Q>>;

// Plain Gauss-Jordan over Q.
inline std::size_t dense_rank(Dense a) {
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0, r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Q f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

inline Dense dense_transpose(const Dense& a) {
  if (a.empty()) return {};
  Dense t(a[0].size(), std::vector<Q>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline Z binom(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Z r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

// sigma_11(n)
inline Z sigma11(long n) {
  Z s = 0;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) {
      Z p;
      mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), 11);
      s += p;
    }
  return s;
}

// tau(1..N) by multiplying out q * prod (1 - q^k)^24 as polynomials, the
// factor (1 - q^k)^24 expanded by binomial coefficients.
inline std::vector<Z> tau_by_binomials(int N) {
  std::vector<Z> c(N, 0);
  c[0] = 1;
  for (int k = 1; k < N; ++k) {
    std::vector<Z> next(N, 0);
    for (int i = 0; i < N; ++i) {
      if (c[i] == 0) continue;
      for (int j = 0; j <= 24 && i + j * k < N; ++j) {
        Z b = binom(24, j);
        next[i + j * k] += (j % 2 ? -b : b) * c[i];
      }
    }
    c = std::move(next);
  }
  return c;
}

// Points of P^1(F_p) encoded 0..p-1 and p = infinity. Returns the number of
// injective n-tuples modulo PGL_2(F_p), computed as an orbit count with the
// first three points normalized to (0, 1, infinity).
inline Z pgl2_orbits_of_distinct_tuples(int n, int p) {
  // PGL_2 acts simply transitively on ordered triples of distinct points, so
  // orbits of distinct n-tuples <-> tuples starting (0, 1, inf).
  if (n < 3) return 0;
  std::vector<int> chosen = {0, 1, p};
  Z count = 0;
  // Depth-first over the remaining n - 3 entries, all distinct from each
  // other and from the first three.
  std::function<void(int)> rec = [&](int depth) {
    if (depth == n - 3) {
      ++count;
      return;
    }
    for (int x = 0; x <= p; ++x) {
      if (std::find(chosen.begin(), chosen.end(), x) != chosen.end()) continue;
      chosen.push_back(x);
      rec(depth + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return count;
}

// Brute-force orbit count with explicit matrices, for tiny cases: counts
// distinct n-tuples, divides by |PGL_2(F_p)| = p^3 - p (free action, n >= 3).
inline Z distinct_tuples_over_pgl2(int n, int p) {
  Z tuples = 1;
  for (int i = 0; i < n; ++i) tuples *= (p + 1 - i);
  Z group = Z(p) * p * p - p;
  return tuples / group;
}

// Lagrange interpolation over Q; returns coefficients (constant first).
inline std::vector<Q> interpolate(const std::vector<Q>& xs, const std::vector<Q>& ys) {
  std::size_t n = xs.size();
  std::vector<Q> coeff(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Q> basis = {1};
    Q denom = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      std::vector<Q> next(basis.size() + 1, 0);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        next[k + 1] += basis[k];
        next[k] -= basis[k] * xs[j];
      }
      basis = std::move(next);
      denom *= xs[i] - xs[j];
    }
    for (std::size_t k = 0; k < n; ++k) coeff[k] += ys[i] * basis[k] / denom;
  }
  return coeff;
}

inline Q eval_poly(const std::vector<Q>& c, const Q& x) {
  Q r = 0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
  return r;
}

// A genus-0 stable tree is determined by its set of edge splits: a family of
// pairwise compatible bipartitions {S, S^c} of the legs with |S|, |S^c| >= 2.
// Any compatible family gives a tree. Splits are stored as the side avoiding
// leg 0. The visitor receives the vertex valences of each tree.
inline void for_each_tree(int n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<std::uint32_t> splits;
  std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t s = 1; s < full; ++s) {
    if (s & 1u) continue;
    int c = __builtin_popcount(s);
    if (c >= 2 && n - c >= 2) splits.push_back(s);
  }
  // Both sides avoid leg 0: compatible iff nested or disjoint.
  auto compatible = [](std::uint32_t a, std::uint32_t b) { return (a & b) == 0 || (a & b) == a || (a & b) == b; };
  auto valences = [&](const std::vector<std::uint32_t>& fam) {
    std::vector<int> out;
    // Vertex below split S (or the root for S = full): maximal proper
    // sub-splits plus legs not covered by them, plus the parent edge.
    auto vertex = [&](std::uint32_t top, bool root) {
      std::uint32_t covered = 0;
      int children = 0;
      for (auto t : fam) {
        if (t == top || (t & top) != t) continue;
        bool maximal = true;
        for (auto u : fam)
          if (u != t && u != top && (u & top) == u && (u & t) == t) maximal = false;
        if (maximal) {
          ++children;
          covered |= t;
        }
      }
      return children + __builtin_popcount(top & ~covered) + (root ? 0 : 1);
    };
    out.push_back(vertex(full, true));
    for (auto s : fam) out.push_back(vertex(s, false));
    return out;
  };
  std::vector<std::uint32_t> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    visit(valences(chosen));
    for (std::size_t i = start; i < splits.size(); ++i) {
      bool ok = true;
      for (auto c : chosen)
        if (!compatible(c, splits[i])) ok = false;
      if (!ok) continue;
      chosen.push_back(splits[i]);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
}

inline std::size_t count_trees(int n) {
  std::size_t total = 0;
  for_each_tree(n, [&](const std::vector<int>&) { ++total; });
  return total;
}

// Points of Mbar_{0,n}(F_p): each tree stratum contributes the product over
// vertices of configuration counts on P^1(F_p).
inline Z m0bar_bruteforce(int n, int p) {
  std::map<int, Z> cache;
  Z total = 0;
  for_each_tree(n, [&](const std::vector<int>& vals) {
    Z prod = 1;
    for (int v : vals) {
      auto it = cache.find(v);
      if (it == cache.end()) it = cache.emplace(v, pgl2_orbits_of_distinct_tuples(v, p)).first;
      prod *= it->second;
    }
    total += prod;
  });
  return total;
}

}  // namespace oracle
