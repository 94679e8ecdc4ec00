#pragma once

#include <array>
#include <string>
#include <vector>

#include "w11/rational.hpp"

namespace w11::count {

/// h^0, h^2, ..., h^12 of a (g, n) together with d = 3g - 3 + n.
struct BettiTable {
  int g = 0, n = 0;
  std::array<Integer, 7> h{};
  int d = 0;
  /// Throws std::invalid_argument unless h^0 = 1 and every entry >= 0.
  void validate() const;
};

/// Sum_{i=0}^{6} h^{2i} q^{d-i}. Terms with d - i < 0 must have h^{2i} = 0.
Integer approx_count(const BettiTable& t, const Integer& q);

/// tau(1..N) from q prod_{k>=1} (1 - q^k)^24; entry i is tau(i + 1).
std::vector<Integer> tau_expansion(int N);

struct OpenCount {
  Integer value;
  bool some_strata_empty = false;  // q < n - 1
};

/// Points of M_{0,n} over F_q: (q-2)(q-3)...(q-n+2).
OpenCount m0_open_count(int n, const Integer& q);

/// Points of Mbar_{0,n} over F_q, summed over stable trees; leg-labeled
/// trees have no automorphisms, so each stratum contributes the product of
/// its open vertex counts.
Integer m0bar_count(int n, const Integer& q, unsigned threads = 1);

struct Genus1Deviation {
  Integer multiplicity;
  std::string description;
};
Genus1Deviation genus1_deviation(int n);

/// c[n] = n! [x^n y^10] sum_{m=1}^{N} x^m/m! (1+y)^{m-1} for 0 <= n <= N.
std::vector<Integer> s12_multiplicity_series(int N);

}  // namespace w11::count
