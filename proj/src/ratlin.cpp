#include "w11/ratlin.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace w11::ratlin {

namespace {

std::vector<std::string> default_labels(char prefix, std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

void normalize_entries(std::vector<Triplet>& entries, std::size_t rows, std::size_t cols) {
  for (const auto& t : entries) {
    if (t.row >= rows || t.col >= cols) {
      throw std::out_of_range("sparse matrix entry index out of range");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Triplet> merged;
  merged.reserve(entries.size());
  for (auto& t : entries) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col) {
      merged.back().value += t.value;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Triplet& t) { return t.value == 0; });
  entries = std::move(merged);
}

}  // namespace

SparseMat::SparseMat(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
                     std::vector<Triplet> entries)
    : row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)),
      entries_(std::move(entries)) {
  normalize_entries(entries_, row_labels_.size(), col_labels_.size());
}

SparseMat::SparseMat(std::size_t rows, std::size_t cols, std::vector<Triplet> entries)
    : SparseMat(default_labels('r', rows), default_labels('c', cols), std::move(entries)) {}

SparseMat SparseMat::identity(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, Rational(1)});
  return SparseMat(n, n, std::move(t));
}

SparseMat SparseMat::from_dense(const std::vector<std::vector<Rational>>& rows) {
  std::size_t ncols = rows.empty() ? 0 : rows.front().size();
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != ncols) throw std::invalid_argument("ragged dense matrix");
    for (std::size_t j = 0; j < ncols; ++j) {
      if (rows[i][j] != 0) t.push_back({i, j, rows[i][j]});
    }
  }
  return SparseMat(rows.size(), ncols, std::move(t));
}

Rational SparseMat::at(std::size_t r, std::size_t c) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{r, c},
                             [](const Triplet& t, const std::pair<std::size_t, std::size_t>& k) {
                               return t.row != k.first ? t.row < k.first : t.col < k.second;
                             });
  if (it != entries_.end() && it->row == r && it->col == c) return it->value;
  return Rational(0);
}

SparseMat SparseMat::transpose() const {
  std::vector<Triplet> t;
  t.reserve(entries_.size());
  for (const auto& e : entries_) t.push_back({e.col, e.row, e.value});
  return SparseMat(col_labels_, row_labels_, std::move(t));
}

SparseMat SparseMat::multiply(const SparseMat& rhs) const {
  if (cols() != rhs.rows()) throw std::invalid_argument("dimension mismatch in multiply");
  // rhs rows as adjacency lists.
  std::vector<std::vector<std::size_t>> rhs_rows(rhs.rows());
  for (std::size_t k = 0; k < rhs.entries_.size(); ++k) rhs_rows[rhs.entries_[k].row].push_back(k);
  std::vector<Triplet> out;
  std::size_t i = 0;
  while (i < entries_.size()) {
    std::size_t row = entries_[i].row;
    std::map<std::size_t, Rational> acc;
    for (; i < entries_.size() && entries_[i].row == row; ++i) {
      for (std::size_t k : rhs_rows[entries_[i].col]) {
        acc[rhs.entries_[k].col] += entries_[i].value * rhs.entries_[k].value;
      }
    }
    for (auto& [c, v] : acc) {
      if (v != 0) out.push_back({row, c, v});
    }
  }
  return SparseMat(row_labels_, rhs.col_labels_, std::move(out));
}

Vector SparseMat::apply(const Vector& x) const {
  if (x.size() != cols()) throw std::invalid_argument("dimension mismatch in apply");
  Vector y(rows(), Rational(0));
  for (const auto& e : entries_) y[e.row] += e.value * x[e.col];
  return y;
}

SparseMat SparseMat::scaled(const Rational& factor) const {
  std::vector<Triplet> t = entries_;
  for (auto& e : t) e.value *= factor;
  return SparseMat(row_labels_, col_labels_, std::move(t));
}

SparseMat SparseMat::submatrix(const std::vector<std::size_t>& rows,
                               const std::vector<std::size_t>& cols) const {
  constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> row_pos(this->rows(), kAbsent), col_pos(this->cols(), kAbsent);
  std::vector<std::string> rl, cl;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    row_pos.at(rows[i]) = i;
    rl.push_back(row_labels_[rows[i]]);
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    col_pos.at(cols[j]) = j;
    cl.push_back(col_labels_[cols[j]]);
  }
  std::vector<Triplet> t;
  for (const auto& e : entries_) {
    if (row_pos[e.row] != kAbsent && col_pos[e.col] != kAbsent) {
      t.push_back({row_pos[e.row], col_pos[e.col], e.value});
    }
  }
  return SparseMat(std::move(rl), std::move(cl), std::move(t));
}

std::vector<std::vector<Rational>> SparseMat::to_dense() const {
  std::vector<std::vector<Rational>> d(rows(), std::vector<Rational>(cols(), Rational(0)));
  for (const auto& e : entries_) d[e.row][e.col] = e.value;
  return d;
}

bool operator==(const SparseMat& a, const SparseMat& b) {
  if (a.row_labels_ != b.row_labels_ || a.col_labels_ != b.col_labels_) return false;
  if (a.entries_.size() != b.entries_.size()) return false;
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    const auto& x = a.entries_[i];
    const auto& y = b.entries_[i];
    if (x.row != y.row || x.col != y.col || x.value != y.value) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Sparse elimination, shared between Z (fraction-free) and F_p.

namespace {

template <class T>
using Row = std::vector<std::pair<std::uint32_t, T>>;

struct IntegerOps {
  using T = Integer;
  static bool is_zero(const T& v) { return v == 0; }
  // s := a*s - b*r with a = r[c], b = s[c], then strip the content.
  void combine(const Row<T>& r, Row<T>& s, std::uint32_t c) const {
    const T& rc = std::lower_bound(r.begin(), r.end(), c,
                                   [](const auto& e, std::uint32_t k) { return e.first < k; })
                      ->second;
    const T& sc = std::lower_bound(s.begin(), s.end(), c,
                                   [](const auto& e, std::uint32_t k) { return e.first < k; })
                      ->second;
    T g;
    mpz_gcd(g.get_mpz_t(), rc.get_mpz_t(), sc.get_mpz_t());
    T a = rc / g;
    T b = sc / g;
    Row<T> out;
    out.reserve(r.size() + s.size());
    auto i = r.begin();
    auto j = s.begin();
    while (i != r.end() || j != s.end()) {
      if (j == s.end() || (i != r.end() && i->first < j->first)) {
        out.emplace_back(i->first, -b * i->second);
        ++i;
      } else if (i == r.end() || j->first < i->first) {
        out.emplace_back(j->first, a * j->second);
        ++j;
      } else {
        T v = a * j->second - b * i->second;
        if (v != 0) out.emplace_back(i->first, std::move(v));
        ++i;
        ++j;
      }
    }
    T content(0);
    for (const auto& e : out) {
      mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), e.second.get_mpz_t());
      if (content == 1) break;
    }
    if (content > 1) {
      for (auto& e : out) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), content.get_mpz_t());
    }
    s = std::move(out);
  }
  void normalize_pivot(Row<T>&, std::uint32_t) const {}
};

struct ModularOps {
  using T = std::uint64_t;
  std::uint64_t p;
  static bool is_zero(const T& v) { return v == 0; }
  std::uint64_t inverse(std::uint64_t a) const {
    // Fermat; p is prime.
    std::uint64_t result = 1, base = a % p, e = p - 2;
    while (e) {
      if (e & 1) result = result * base % p;
      base = base * base % p;
      e >>= 1;
    }
    return result;
  }
  void normalize_pivot(Row<T>& r, std::uint32_t c) const {
    auto it = std::lower_bound(r.begin(), r.end(), c,
                               [](const auto& e, std::uint32_t k) { return e.first < k; });
    std::uint64_t inv = inverse(it->second);
    for (auto& e : r) e.second = e.second * inv % p;
  }
  // r has r[c] == 1: s := s - s[c] * r.
  void combine(const Row<T>& r, Row<T>& s, std::uint32_t c) const {
    std::uint64_t b = std::lower_bound(s.begin(), s.end(), c,
                                       [](const auto& e, std::uint32_t k) { return e.first < k; })
                          ->second;
    std::uint64_t nb = (p - b) % p;
    Row<T> out;
    out.reserve(r.size() + s.size());
    auto i = r.begin();
    auto j = s.begin();
    while (i != r.end() || j != s.end()) {
      if (j == s.end() || (i != r.end() && i->first < j->first)) {
        out.emplace_back(i->first, nb * i->second % p);
        ++i;
      } else if (i == r.end() || j->first < i->first) {
        out.push_back(*j);
        ++j;
      } else {
        std::uint64_t v = (j->second + nb * i->second) % p;
        if (v != 0) out.emplace_back(i->first, v);
        ++i;
        ++j;
      }
    }
    s = std::move(out);
  }
};

bool row_has(const auto& row, std::uint32_t c) {
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, std::uint32_t k) { return e.first < k; });
  return it != row.end() && it->first == c;
}

// Right-looking sparse elimination. Pivot column: fewest remaining nonzeros,
// ties broken by column index. Pivot row: fewest nonzeros, ties by row index.
template <class Ops>
std::size_t eliminate(std::vector<Row<typename Ops::T>> rows, std::size_t ncols, const Ops& ops,
                      EliminationStats& stats) {
  const std::size_t nrows = rows.size();
  std::vector<std::vector<std::uint32_t>> col_rows(ncols);
  std::vector<std::size_t> col_count(ncols, 0);
  std::size_t total = 0;
  for (std::size_t r = 0; r < nrows; ++r) {
    for (const auto& e : rows[r]) {
      col_rows[e.first].push_back(static_cast<std::uint32_t>(r));
      ++col_count[e.first];
    }
    total += rows[r].size();
  }
  stats.initial_nnz = total;
  stats.peak_nnz = total;
  std::set<std::pair<std::size_t, std::uint32_t>> queue;
  for (std::size_t c = 0; c < ncols; ++c) {
    if (col_count[c] > 0) queue.insert({col_count[c], static_cast<std::uint32_t>(c)});
  }
  std::vector<char> alive(nrows, 1);
  auto adjust = [&](std::uint32_t c, long delta) {
    if (col_count[c] > 0) queue.erase({col_count[c], c});
    col_count[c] = static_cast<std::size_t>(static_cast<long>(col_count[c]) + delta);
    if (col_count[c] > 0) queue.insert({col_count[c], c});
  };

  std::size_t rank = 0;
  std::vector<std::uint32_t> candidates;
  while (!queue.empty()) {
    const std::uint32_t c = queue.begin()->second;
    candidates.clear();
    for (std::uint32_t r : col_rows[c]) {
      if (alive[r] && row_has(rows[r], c)) candidates.push_back(r);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    col_rows[c] = candidates;
    if (candidates.empty()) {  // stale count; cannot happen with exact bookkeeping
      queue.erase(queue.begin());
      col_count[c] = 0;
      continue;
    }
    std::uint32_t pivot = candidates.front();
    for (std::uint32_t r : candidates) {
      if (rows[r].size() < rows[pivot].size()) pivot = r;
    }
    ops.normalize_pivot(rows[pivot], c);
    const auto& prow = rows[pivot];
    for (std::uint32_t s : candidates) {
      if (s == pivot) continue;
      auto old_row = std::move(rows[s]);
      rows[s] = old_row;
      ops.combine(prow, rows[s], c);
      ++stats.row_operations;
      // Update column bookkeeping by diffing supports.
      auto i = old_row.begin();
      auto j = rows[s].begin();
      while (i != old_row.end() || j != rows[s].end()) {
        if (j == rows[s].end() || (i != old_row.end() && i->first < j->first)) {
          adjust(i->first, -1);
          --total;
          ++i;
        } else if (i == old_row.end() || j->first < i->first) {
          adjust(j->first, +1);
          col_rows[j->first].push_back(s);
          ++total;
          ++j;
        } else {
          ++i;
          ++j;
        }
      }
      stats.peak_nnz = std::max(stats.peak_nnz, total);
    }
    for (const auto& e : prow) adjust(e.first, -1);
    total -= prow.size();
    alive[pivot] = 0;
    rows[pivot].clear();
    rows[pivot].shrink_to_fit();
    ++rank;
  }
  stats.pivots = rank;
  return rank;
}

std::vector<Row<Integer>> integer_rows(const SparseMat& m) {
  std::vector<Row<Rational>> qrows(m.rows());
  for (const auto& e : m.entries()) qrows[e.row].emplace_back(static_cast<std::uint32_t>(e.col), e.value);
  std::vector<Row<Integer>> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Integer l(1);
    for (const auto& e : qrows[r]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.second.get_den_mpz_t());
    out[r].reserve(qrows[r].size());
    for (const auto& e : qrows[r]) {
      Integer v = e.second.get_num() * (l / e.second.get_den());
      out[r].emplace_back(e.first, std::move(v));
    }
  }
  return out;
}

std::uint64_t reduce_mod(const Rational& q, std::uint64_t p, const ModularOps& ops) {
  std::uint64_t den = mpz_fdiv_ui(q.get_den_mpz_t(), p);
  if (den == 0) throw std::domain_error("denominator divisible by the modular prime");
  std::uint64_t num = mpz_fdiv_ui(q.get_num_mpz_t(), p);
  return num * ops.inverse(den) % p;
}

}  // namespace

std::size_t modular_rank(const SparseMat& m, std::uint64_t prime, EliminationStats* stats) {
  if (prime < 2 || prime >= (1ULL << 32)) throw std::invalid_argument("modular prime out of range");
  ModularOps ops{prime};
  std::vector<Row<std::uint64_t>> rows(m.rows());
  for (const auto& e : m.entries()) {
    std::uint64_t v = reduce_mod(e.value, prime, ops);
    if (v != 0) rows[e.row].emplace_back(static_cast<std::uint32_t>(e.col), v);
  }
  EliminationStats local;
  std::size_t r = eliminate(std::move(rows), m.cols(), ops, local);
  if (stats) *stats = local;
  return r;
}

RankResult rank_with_stats(const SparseMat& m, const RankOptions& options) {
  auto start = std::chrono::steady_clock::now();
  RankResult result;
  if (options.modular_precheck) {
    result.prime = options.prime;
    result.modular_rank = modular_rank(m, options.prime, &result.modular_stats);
  }
  result.rank = eliminate(integer_rows(m), m.cols(), IntegerOps{}, result.exact_stats);
  if (result.modular_rank && *result.modular_rank != result.rank) {
    std::ostringstream msg;
    msg << "modular rank " << *result.modular_rank << " (p=" << options.prime
        << ") disagrees with exact rank " << result.rank << " on a " << m.rows() << "x"
        << m.cols() << " matrix";
    throw InconsistencyError(msg.str());
  }
  result.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return result;
}

std::size_t rank(const SparseMat& m, const RankOptions& options) {
  return rank_with_stats(m, options).rank;
}

bool is_probable_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Dense Gauss-Jordan.

namespace {

struct Rref {
  std::vector<std::vector<Rational>> a;
  std::vector<std::size_t> pivot_cols;
};

// Reduces the first `ncols` columns; extra columns (augmentation) ride along.
Rref rref(std::vector<std::vector<Rational>> a, std::size_t ncols) {
  Rref out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    Rational inv = 1 / a[r][c];
    for (auto& v : a[r]) v *= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (std::size_t j = c; j < a[i].size(); ++j) {
        if (a[r][j] != 0) a[i][j] -= f * a[r][j];
      }
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.a = std::move(a);
  return out;
}

}  // namespace

std::vector<Vector> kernel_basis(const SparseMat& m) {
  Rref red = rref(m.to_dense(), m.cols());
  std::vector<char> is_pivot(m.cols(), 0);
  for (std::size_t c : red.pivot_cols) is_pivot[c] = 1;
  std::vector<Vector> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols(), Rational(0));
    v[f] = 1;
    for (std::size_t k = 0; k < red.pivot_cols.size(); ++k) {
      v[red.pivot_cols[k]] = -red.a[k][f];
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<Vector> solve(const SparseMat& m, const Vector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("right-hand side length mismatch");
  auto dense = m.to_dense();
  for (std::size_t i = 0; i < dense.size(); ++i) dense[i].push_back(b[i]);
  Rref red = rref(std::move(dense), m.cols());
  for (std::size_t i = red.pivot_cols.size(); i < red.a.size(); ++i) {
    if (red.a[i][m.cols()] != 0) return std::nullopt;
  }
  Vector x(m.cols(), Rational(0));
  for (std::size_t k = 0; k < red.pivot_cols.size(); ++k) x[red.pivot_cols[k]] = red.a[k][m.cols()];
  return x;
}

// ---------------------------------------------------------------------------
// Signed actions.

SignedPerm SignedPerm::identity(std::size_t n) {
  SignedPerm p;
  p.image.resize(n);
  std::iota(p.image.begin(), p.image.end(), std::size_t{0});
  p.sign.assign(n, 1);
  return p;
}

SignedPerm SignedPerm::compose(const SignedPerm& other) const {
  if (other.size() != size()) throw std::invalid_argument("signed permutation size mismatch");
  SignedPerm out;
  out.image.resize(size());
  out.sign.resize(size());
  for (std::size_t i = 0; i < size(); ++i) {
    out.image[i] = image[other.image[i]];
    out.sign[i] = sign[other.image[i]] * other.sign[i];
  }
  return out;
}

SparseMat SignedPerm::to_matrix() const {
  std::vector<Triplet> t;
  t.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) t.push_back({image[i], i, Rational(sign[i])});
  return SparseMat(size(), size(), std::move(t));
}

SignedPerm SignedPerm::from_matrix(const SparseMat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("signed permutation matrix must be square");
  SignedPerm p;
  p.image.assign(m.cols(), m.rows());
  p.sign.assign(m.cols(), 0);
  std::vector<char> row_used(m.rows(), 0);
  for (const auto& e : m.entries()) {
    if (e.value != 1 && e.value != -1) throw std::invalid_argument("entry is not ±1");
    if (p.sign[e.col] != 0 || row_used[e.row]) {
      throw std::invalid_argument("not a signed permutation matrix");
    }
    p.image[e.col] = e.row;
    p.sign[e.col] = e.value > 0 ? 1 : -1;
    row_used[e.row] = 1;
  }
  for (int s : p.sign) {
    if (s == 0) throw std::invalid_argument("not a signed permutation matrix");
  }
  return p;
}

SignedAction::SignedAction(std::vector<SignedPerm> elements, std::vector<int> character)
    : elements_(std::move(elements)), character_(std::move(character)) {
  if (elements_.empty()) throw std::invalid_argument("signed action needs at least one element");
  if (character_.size() != elements_.size()) throw std::invalid_argument("character size mismatch");
  dim_ = elements_.front().size();
  for (const auto& g : elements_) {
    if (g.size() != dim_) throw std::invalid_argument("group elements of unequal size");
    std::vector<char> seen(dim_, 0);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (g.image[i] >= dim_ || seen[g.image[i]] || (g.sign[i] != 1 && g.sign[i] != -1)) {
        throw std::invalid_argument("group element is not a signed permutation");
      }
      seen[g.image[i]] = 1;
    }
  }
  for (int c : character_) {
    if (c != 1 && c != -1) throw std::invalid_argument("character values must be ±1");
  }
  auto find = [&](const SignedPerm& x) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < elements_.size(); ++k) {
      if (elements_[k] == x) return k;
    }
    return std::nullopt;
  };
  for (std::size_t a = 0; a < elements_.size(); ++a) {
    for (std::size_t b = 0; b < elements_.size(); ++b) {
      auto k = find(elements_[a].compose(elements_[b]));
      if (!k) throw std::invalid_argument("signed action is not closed under composition");
      if (character_[*k] != character_[a] * character_[b]) {
        throw std::invalid_argument("character is not multiplicative");
      }
    }
  }
}

SignedAction SignedAction::from_matrices(const std::vector<SparseMat>& matrices,
                                         std::vector<int> character) {
  std::vector<SignedPerm> elements;
  elements.reserve(matrices.size());
  for (const auto& m : matrices) elements.push_back(SignedPerm::from_matrix(m));
  return SignedAction(std::move(elements), std::move(character));
}

SignedAction SignedAction::trivial(std::size_t dim) {
  return SignedAction({SignedPerm::identity(dim)}, {1});
}

InvariantBasis invariant_basis(const SignedAction& action) {
  const std::size_t n = action.dim();
  InvariantBasis out;
  out.ambient_dim = n;
  std::vector<char> visited(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (visited[i]) continue;
    // Orbit sum of e_i twisted by the character; entries accumulate per image.
    std::map<std::size_t, long> acc;
    for (std::size_t k = 0; k < action.order(); ++k) {
      const auto& g = action.elements()[k];
      acc[g.image[i]] += static_cast<long>(action.character()[k]) * g.sign[i];
      visited[g.image[i]] = 1;
    }
    // i is the smallest index of its orbit, so it is the pivot when nonzero.
    long lead = acc[i];
    if (lead == 0) continue;
    SparseVec v;
    for (const auto& [j, c] : acc) {
      if (c != 0) v.emplace_back(j, make_rational(c, lead));
    }
    out.pivots.push_back(i);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

InvariantBasis full_basis(std::size_t dim) {
  InvariantBasis out;
  out.ambient_dim = dim;
  out.vectors.reserve(dim);
  out.pivots.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    out.vectors.push_back({{i, Rational(1)}});
    out.pivots.push_back(i);
  }
  return out;
}

std::optional<Vector> InvariantBasis::coordinates(const SparseVec& v) const {
  Vector coords(vectors.size(), Rational(0));
  std::map<std::size_t, std::size_t> pivot_slot;
  for (std::size_t k = 0; k < pivots.size(); ++k) pivot_slot[pivots[k]] = k;
  for (const auto& [i, val] : v) {
    auto it = pivot_slot.find(i);
    if (it != pivot_slot.end()) coords[it->second] = val;
  }
  SparseVec rebuilt;
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (coords[k] != 0) axpy(rebuilt, coords[k], vectors[k]);
  }
  if (rebuilt.size() != v.size()) return std::nullopt;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (rebuilt[k].first != v[k].first || rebuilt[k].second != v[k].second) return std::nullopt;
  }
  return coords;
}

// ---------------------------------------------------------------------------

SparseVec sparse_from_dense(const Vector& v) {
  SparseVec out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) out.emplace_back(i, v[i]);
  }
  return out;
}

Vector dense_from_sparse(const SparseVec& v, std::size_t dim) {
  Vector out(dim, Rational(0));
  for (const auto& [i, x] : v) out.at(i) = x;
  return out;
}

void axpy(SparseVec& acc, const Rational& factor, const SparseVec& v) {
  if (factor == 0 || v.empty()) return;
  SparseVec out;
  out.reserve(acc.size() + v.size());
  auto i = acc.begin();
  auto j = v.begin();
  while (i != acc.end() || j != v.end()) {
    if (j == v.end() || (i != acc.end() && i->first < j->first)) {
      out.push_back(std::move(*i));
      ++i;
    } else if (i == acc.end() || j->first < i->first) {
      out.emplace_back(j->first, factor * j->second);
      ++j;
    } else {
      Rational x = i->second + factor * j->second;
      if (x != 0) out.emplace_back(i->first, std::move(x));
      ++i;
      ++j;
    }
  }
  acc = std::move(out);
}

// ---------------------------------------------------------------------------
// Text format.

void write_matrix(std::ostream& out, const SparseMat& m) {
  out << "%%sparse-rational rows=" << m.rows() << " cols=" << m.cols() << "\n";
  std::vector<const Triplet*> order;
  order.reserve(m.nnz());
  for (const auto& e : m.entries()) order.push_back(&e);
  const auto& rl = m.row_labels();
  const auto& cl = m.col_labels();
  std::sort(order.begin(), order.end(), [&](const Triplet* a, const Triplet* b) {
    int c = rl[a->row].compare(rl[b->row]);
    if (c != 0) return c < 0;
    return cl[a->col] < cl[b->col];
  });
  for (const Triplet* e : order) {
    out << rl[e->row] << ' ' << cl[e->col] << ' ' << to_string(e->value) << '\n';
  }
}

void write_matrix_file(const std::string& path, const SparseMat& m) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open matrix file for writing: " + path);
  write_matrix(out, m);
  out.flush();
  if (!out) throw std::ios_base::failure("failed writing matrix file: " + path);
}

SparseMat read_matrix(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty matrix file");
  std::size_t rows = 0, cols = 0;
  {
    std::istringstream hs(header);
    std::string tag, r, c;
    hs >> tag >> r >> c;
    if (tag != "%%sparse-rational" || r.rfind("rows=", 0) != 0 || c.rfind("cols=", 0) != 0) {
      throw std::runtime_error("bad matrix header: " + header);
    }
    rows = std::stoul(r.substr(5));
    cols = std::stoul(c.substr(5));
  }
  struct Raw {
    std::string r, c;
    Rational v;
  };
  std::vector<Raw> raw;
  std::set<std::string> rset, cset;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Raw e;
    std::string v;
    if (!(ls >> e.r >> e.c >> v)) throw std::runtime_error("bad matrix entry: " + line);
    e.v = parse_rational(v);
    rset.insert(e.r);
    cset.insert(e.c);
    raw.push_back(std::move(e));
  }
  if (rset.size() > rows || cset.size() > cols) {
    throw std::runtime_error("matrix file has more labels than declared");
  }
  std::vector<std::string> rl(rset.begin(), rset.end()), cl(cset.begin(), cset.end());
  std::map<std::string, std::size_t> rindex, cindex;
  for (std::size_t i = 0; i < rl.size(); ++i) rindex[rl[i]] = i;
  for (std::size_t j = 0; j < cl.size(); ++j) cindex[cl[j]] = j;
  for (std::size_t i = rl.size(); i < rows; ++i) rl.push_back("_row" + std::to_string(i));
  for (std::size_t j = cl.size(); j < cols; ++j) cl.push_back("_col" + std::to_string(j));
  std::vector<Triplet> t;
  t.reserve(raw.size());
  for (auto& e : raw) t.push_back({rindex[e.r], cindex[e.c], std::move(e.v)});
  return SparseMat(std::move(rl), std::move(cl), std::move(t));
}

SparseMat read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open matrix file: " + path);
  return read_matrix(in);
}

}  // namespace w11::ratlin
