#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "w11/rational.hpp"

namespace w11::ratlin {

using Vector = std::vector<Rational>;
/// Sparse vector: (index, value) pairs, strictly increasing indices, no zeros.
using SparseVec = std::vector<std::pair<std::size_t, Rational>>;

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  Rational value;
};

/// Raised when the modular precheck and the exact elimination disagree.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact sparse matrix with labeled rows and columns. Immutable once built:
/// duplicate (row, col) triplets are summed, zeros dropped, entries sorted
/// row-major.
class SparseMat {
 public:
  SparseMat() = default;
  SparseMat(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
            std::vector<Triplet> entries);
  /// Unlabeled convenience form; labels become "r<i>" / "c<j>".
  SparseMat(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

  static SparseMat identity(std::size_t n);
  static SparseMat from_dense(const std::vector<std::vector<Rational>>& rows);

  std::size_t rows() const { return row_labels_.size(); }
  std::size_t cols() const { return col_labels_.size(); }
  std::size_t nnz() const { return entries_.size(); }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }
  const std::vector<Triplet>& entries() const { return entries_; }

  Rational at(std::size_t r, std::size_t c) const;
  bool is_zero() const { return entries_.empty(); }

  SparseMat transpose() const;
  /// this * rhs; rhs.rows() must equal cols().
  SparseMat multiply(const SparseMat& rhs) const;
  Vector apply(const Vector& x) const;
  SparseMat scaled(const Rational& factor) const;
  /// Keep the listed rows/cols (in the listed order).
  SparseMat submatrix(const std::vector<std::size_t>& rows,
                      const std::vector<std::size_t>& cols) const;
  std::vector<std::vector<Rational>> to_dense() const;

  friend bool operator==(const SparseMat& a, const SparseMat& b);

 private:
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
  std::vector<Triplet> entries_;
};

// ---------------------------------------------------------------------------
// Rank.

struct EliminationStats {
  std::size_t pivots = 0;
  std::size_t initial_nnz = 0;
  std::size_t peak_nnz = 0;
  std::size_t row_operations = 0;
};

struct RankOptions {
  bool modular_precheck = true;
  std::uint64_t prime = 1073741789;  // largest prime below 2^30
};

struct RankResult {
  std::size_t rank = 0;
  std::optional<std::size_t> modular_rank;
  std::uint64_t prime = 0;
  EliminationStats exact_stats;
  EliminationStats modular_stats;
  std::chrono::milliseconds elapsed{0};
};

/// Exact rank over Q by fraction-free sparse elimination. With the modular
/// precheck enabled, a modular rank exceeding the exact rank (impossible for
/// correct code) raises InconsistencyError; a smaller modular rank means an
/// unlucky prime and is reported as a disagreement as well.
std::size_t rank(const SparseMat& m, const RankOptions& options = {});
RankResult rank_with_stats(const SparseMat& m, const RankOptions& options = {});

/// Rank over F_p. Throws std::domain_error if an entry's denominator is
/// divisible by p.
std::size_t modular_rank(const SparseMat& m, std::uint64_t prime,
                         EliminationStats* stats = nullptr);

bool is_probable_prime(std::uint64_t n);

// ---------------------------------------------------------------------------
// Kernel and solving. Dense Gauss-Jordan over Q; intended for desk-scale
// matrices (a few thousand entries per side).

std::vector<Vector> kernel_basis(const SparseMat& m);

/// Some x with m x = b, or nullopt when the system is inconsistent. Pivots
/// are taken in column order and free variables are set to zero, so the
/// answer is deterministic.
std::optional<Vector> solve(const SparseMat& m, const Vector& b);

// ---------------------------------------------------------------------------
// Signed group actions.

/// A signed permutation of {0..n-1}: e_i maps to sign[i] * e_{image[i]}.
struct SignedPerm {
  std::vector<std::size_t> image;
  std::vector<int> sign;

  static SignedPerm identity(std::size_t n);
  std::size_t size() const { return image.size(); }
  /// (this ∘ other)(e_i) = this(other(e_i)).
  SignedPerm compose(const SignedPerm& other) const;
  SparseMat to_matrix() const;
  static SignedPerm from_matrix(const SparseMat& m);
  friend bool operator==(const SignedPerm&, const SignedPerm&) = default;
};

/// A finite group acting by signed permutation matrices together with a
/// ±1-valued character. Construction checks closure, the signed-permutation
/// shape, and multiplicativity of the character.
class SignedAction {
 public:
  SignedAction(std::vector<SignedPerm> elements, std::vector<int> character);
  static SignedAction from_matrices(const std::vector<SparseMat>& matrices,
                                    std::vector<int> character);
  static SignedAction trivial(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<SignedPerm>& elements() const { return elements_; }
  const std::vector<int>& character() const { return character_; }

 private:
  std::size_t dim_ = 0;
  std::vector<SignedPerm> elements_;
  std::vector<int> character_;
};

/// Basis of the image of (1/|G|) Σ χ(g) ρ(g). Every vector has coefficient 1
/// at its pivot index (its smallest support index) and no other basis vector
/// touches that index, so coordinates of an invariant vector are read off at
/// the pivots.
struct InvariantBasis {
  std::size_t ambient_dim = 0;
  std::vector<SparseVec> vectors;
  std::vector<std::size_t> pivots;

  std::size_t dim() const { return vectors.size(); }
  /// Coordinates of v, or nullopt if v is not in the span.
  std::optional<Vector> coordinates(const SparseVec& v) const;
};

InvariantBasis invariant_basis(const SignedAction& action);
/// The standard basis in the same representation (trivial group).
InvariantBasis full_basis(std::size_t dim);

// ---------------------------------------------------------------------------
// Sparse-vector helpers.

SparseVec sparse_from_dense(const Vector& v);
Vector dense_from_sparse(const SparseVec& v, std::size_t dim);
/// acc += factor * v; both sorted.
void axpy(SparseVec& acc, const Rational& factor, const SparseVec& v);

// ---------------------------------------------------------------------------
// File format: "%%sparse-rational rows=<R> cols=<C>" then one entry per line,
// "<row_label> <col_label> <num>/<den>", sorted by (row_label, col_label).

void write_matrix(std::ostream& out, const SparseMat& m);
void write_matrix_file(const std::string& path, const SparseMat& m);
/// Rows/cols are the labels seen in entries in sorted order, padded with
/// "_row<i>" / "_col<j>" placeholders up to the declared sizes.
SparseMat read_matrix(std::istream& in);
SparseMat read_matrix_file(const std::string& path);

}  // namespace w11::ratlin
