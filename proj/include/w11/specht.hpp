#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "w11/ratlin.hpp"

namespace w11::specht {

/// A marking on a vertex: a leg of the ambient curve, or one side of a node.
/// Legs sort before nodes; nodes sort by (edge, side).
struct Mark {
  enum class Kind : std::uint8_t { Leg = 0, Node = 1 };
  Kind kind = Kind::Leg;
  int a = 0;  // leg number, or edge id
  int b = 0;  // node side (0/1); 0 for legs

  static Mark leg(int k) { return {Kind::Leg, k, 0}; }
  static Mark node(int edge, int side) { return {Kind::Node, edge, side}; }
  bool is_leg() const { return kind == Kind::Leg; }
  /// "L<k>" or "N<edge>.<side>".
  std::string str() const;
  static Mark parse(const std::string& text);

  friend auto operator<=>(const Mark&, const Mark&) = default;
};

using Alphabet = std::vector<Mark>;      // strictly increasing
using OrderedTuple = std::vector<Mark>;  // distinct entries, any order

/// Marks 1..m as legs.
Alphabet leg_alphabet(int m);
void validate_alphabet(const Alphabet& alphabet);
/// Position of a mark in the alphabet; throws if absent.
int position(const Alphabet& alphabet, const Mark& mark);

/// Sign of the permutation i -> perm[i] of {0..k-1}.
int perm_sign(const std::vector<int>& perm);
/// Sorts `values` ascending and returns the sign of the sorting permutation,
/// or 0 if two entries coincide.
template <class T>
int sort_sign(std::vector<T>& values) {
  int sign = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    for (std::size_t j = i; j > 0 && values[j] < values[j - 1]; --j) {
      std::swap(values[j], values[j - 1]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i - 1] < values[i])) return 0;
  }
  return sign;
}

// ---------------------------------------------------------------------------
// Subset indexing. Subsets of alphabet positions are bitmasks (m <= 32).
// k-subsets are ranked in colexicographic order.

using Mask = std::uint32_t;
constexpr int kMaxAlphabet = 32;

std::uint64_t binom64(int n, int k);
std::uint64_t colex_rank(Mask mask);
Mask colex_unrank(std::uint64_t rank, int k);

/// Number of standard generators, binom(m-1, 10); 0 for m < 11.
std::size_t generator_count(int m);
/// Generator index <-> 11-subset mask containing position 0.
std::size_t generator_index(Mask eleven_with_zero);
Mask generator_mask(std::size_t index);

/// Expands omega of an ordered 11-tuple of distinct alphabet positions in
/// the standard generators, appending (generator index, ±1) terms. Uses the
/// 12-term relation when position 0 is absent (11 terms), otherwise a
/// single signed generator.
void omega_in_generators(const int* positions, std::vector<std::pair<std::size_t, int>>& out);

// ---------------------------------------------------------------------------

/// Element of the multiplicity space of H^11 of a genus-1 vertex, in
/// coordinates over unordered 10-subsets of the alphabet.
struct H11Vector {
  Alphabet alphabet;
  std::map<Mask, Rational> coeffs;  // keys are 10-subset masks; no zeros

  bool is_zero() const { return coeffs.empty(); }
  void add(Mask key, const Rational& value);
  friend bool operator==(const H11Vector&, const H11Vector&) = default;
};

H11Vector operator+(const H11Vector& a, const H11Vector& b);
H11Vector operator*(const Rational& s, const H11Vector& v);

std::string subset_key(const Alphabet& alphabet, Mask mask);

/// Simplicial boundary of the ordered tuple A: coefficient
/// (-1)^(j-1) * sign(sorting of A minus a_j) on A minus a_j.
H11Vector omega(const OrderedTuple& a, const Alphabet& alphabet);

/// Increasing 11-tuples containing the minimal mark, in generator-index
/// order.
std::vector<OrderedTuple> standard_generators(const Alphabet& alphabet);

/// Ambient expansion of sum c_i * omega(generator i).
H11Vector expand_generators(const Alphabet& alphabet, const ratlin::Vector& coeffs);

/// Coefficients over standard_generators, or nullopt if v is not in the
/// span. A 10-subset avoiding the minimal mark is touched by exactly one
/// generator (with coefficient +1), so coefficients are read off there and
/// confirmed by re-expansion.
std::optional<ratlin::Vector> express_in_generators(const H11Vector& v);
/// The same answer obtained by solving against the full generator-expansion
/// matrix; dense, for cross-checks at small m.
std::optional<ratlin::Vector> express_in_generators_by_solve(const H11Vector& v);
/// Generator-expansion matrix: rows = 10-subsets (colex), cols = generators.
ratlin::SparseMat generator_expansion_matrix(const Alphabet& alphabet);

bool membership_in_span(const H11Vector& v);

/// Signed relabeling by a bijection of the alphabet, given as the image of
/// each alphabet entry (same order as the alphabet).
H11Vector act(const std::vector<Mark>& sigma, const H11Vector& v);

/// JSON-ready form: alphabet strings and "m1,...,m10" -> "num/den".
struct H11VectorText {
  std::vector<std::string> alphabet;
  std::map<std::string, std::string> coeffs;
};
H11VectorText to_text(const H11Vector& v);
H11Vector from_text(const H11VectorText& t);

}  // namespace w11::specht
