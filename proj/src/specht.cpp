#include "w11/specht.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>

namespace w11::specht {

std::string Mark::str() const {
  if (is_leg()) return "L" + std::to_string(a);
  return "N" + std::to_string(a) + "." + std::to_string(b);
}

Mark Mark::parse(const std::string& text) {
  try {
    if (text.size() >= 2 && text[0] == 'L') {
      std::size_t used = 0;
      int k = std::stoi(text.substr(1), &used);
      if (used + 1 == text.size() && k >= 1) return leg(k);
    } else if (text.size() >= 4 && text[0] == 'N') {
      auto dot = text.find('.');
      if (dot != std::string::npos) {
        int e = std::stoi(text.substr(1, dot - 1));
        int s = std::stoi(text.substr(dot + 1));
        if (e >= 0 && (s == 0 || s == 1) && node(e, s).str() == text) return node(e, s);
      }
    }
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("malformed mark: " + text);
}

Alphabet leg_alphabet(int m) {
  Alphabet out;
  for (int k = 1; k <= m; ++k) out.push_back(Mark::leg(k));
  return out;
}

void validate_alphabet(const Alphabet& alphabet) {
  if (alphabet.size() > static_cast<std::size_t>(kMaxAlphabet)) {
    throw std::invalid_argument("alphabet larger than 32 marks");
  }
  for (std::size_t i = 1; i < alphabet.size(); ++i) {
    if (!(alphabet[i - 1] < alphabet[i])) throw std::invalid_argument("alphabet not strictly increasing");
  }
}

int position(const Alphabet& alphabet, const Mark& mark) {
  auto it = std::lower_bound(alphabet.begin(), alphabet.end(), mark);
  if (it == alphabet.end() || *it != mark) {
    throw std::invalid_argument("mark " + mark.str() + " not in alphabet");
  }
  return static_cast<int>(it - alphabet.begin());
}

int perm_sign(const std::vector<int>& perm) {
  std::vector<char> seen(perm.size(), 0);
  for (int x : perm) {
    if (x < 0 || static_cast<std::size_t>(x) >= perm.size() || seen[x]) throw std::invalid_argument("not a permutation");
    seen[x] = 1;
  }
  std::fill(seen.begin(), seen.end(), 0);
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
      seen[j] = 1;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

// ---------------------------------------------------------------------------

namespace {

struct BinomTable {
  std::array<std::array<std::uint64_t, kMaxAlphabet + 1>, kMaxAlphabet + 1> c{};
  constexpr BinomTable() {
    for (int n = 0; n <= kMaxAlphabet; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
  }
};
constexpr BinomTable kBinom{};

}  // namespace

std::uint64_t binom64(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (n > kMaxAlphabet) throw std::out_of_range("binomial table limited to n <= 32");
  return kBinom.c[n][k];
}

std::uint64_t colex_rank(Mask mask) {
  std::uint64_t r = 0;
  int i = 0;
  while (mask) {
    int p = std::countr_zero(mask);
    ++i;
    r += binom64(p, i);
    mask &= mask - 1;
  }
  return r;
}

Mask colex_unrank(std::uint64_t rank, int k) {
  Mask out = 0;
  int p = kMaxAlphabet - 1;
  for (int i = k; i >= 1; --i) {
    while (binom64(p, i) > rank) --p;
    out |= Mask{1} << p;
    rank -= binom64(p, i);
    --p;
  }
  return out;
}

std::size_t generator_count(int m) {
  return m < 11 ? 0 : static_cast<std::size_t>(binom64(m - 1, 10));
}

std::size_t generator_index(Mask eleven_with_zero) {
  return static_cast<std::size_t>(colex_rank(eleven_with_zero >> 1));
}

Mask generator_mask(std::size_t index) { return (colex_unrank(index, 10) << 1) | 1u; }

void omega_in_generators(const int* positions, std::vector<std::pair<std::size_t, int>>& out) {
  std::array<int, 11> s;
  std::copy(positions, positions + 11, s.begin());
  int sign = 1;
  for (int i = 1; i < 11; ++i) {
    for (int j = i; j > 0 && s[j] < s[j - 1]; --j) {
      std::swap(s[j], s[j - 1]);
      sign = -sign;
    }
  }
  Mask mask = 0;
  for (int p : s) mask |= Mask{1} << p;
  if (std::popcount(mask) != 11) throw std::invalid_argument("omega of a tuple with repeated marks");
  if (s[0] == 0) {
    out.emplace_back(generator_index(mask), sign);
    return;
  }
  // C = {0} ∪ s, c_1 = 0, c_j = s[j-2]; omega(C \ c_1) = Σ_{j>=2} (-1)^j omega(C \ c_j).
  Mask full = mask | 1u;
  for (int j = 2; j <= 12; ++j) {
    int term = (j % 2 == 0) ? sign : -sign;
    out.emplace_back(generator_index(full & ~(Mask{1} << s[j - 2])), term);
  }
}

// ---------------------------------------------------------------------------

void H11Vector::add(Mask key, const Rational& value) {
  if (value == 0) return;
  auto [it, inserted] = coeffs.try_emplace(key, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) coeffs.erase(it);
  }
}

H11Vector operator+(const H11Vector& a, const H11Vector& b) {
  if (a.alphabet != b.alphabet) throw std::invalid_argument("adding vectors over different alphabets");
  H11Vector out = a;
  for (const auto& [k, v] : b.coeffs) out.add(k, v);
  return out;
}

H11Vector operator*(const Rational& s, const H11Vector& v) {
  H11Vector out{v.alphabet, {}};
  if (s == 0) return out;
  for (const auto& [k, x] : v.coeffs) out.coeffs.emplace(k, s * x);
  return out;
}

std::string subset_key(const Alphabet& alphabet, Mask mask) {
  std::string out;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (mask >> i & 1u) {
      if (!out.empty()) out += ',';
      out += alphabet[i].str();
    }
  }
  return out;
}

H11Vector omega(const OrderedTuple& a, const Alphabet& alphabet) {
  validate_alphabet(alphabet);
  if (a.size() != 11) throw std::invalid_argument("omega needs an 11-tuple");
  std::vector<int> pos;
  pos.reserve(11);
  for (const auto& mark : a) pos.push_back(position(alphabet, mark));
  {
    auto check = pos;
    if (sort_sign(check) == 0) throw std::invalid_argument("omega of a tuple with repeated marks");
  }
  H11Vector out{alphabet, {}};
  for (int j = 0; j < 11; ++j) {
    std::vector<int> rest;
    rest.reserve(10);
    for (int i = 0; i < 11; ++i) {
      if (i != j) rest.push_back(pos[i]);
    }
    int s = sort_sign(rest);
    Mask mask = 0;
    for (int p : rest) mask |= Mask{1} << p;
    out.add(mask, Rational((j % 2 == 0) ? s : -s));
  }
  return out;
}

std::vector<OrderedTuple> standard_generators(const Alphabet& alphabet) {
  validate_alphabet(alphabet);
  int m = static_cast<int>(alphabet.size());
  if (m < 11) throw std::invalid_argument("standard generators need at least 11 marks");
  std::size_t count = generator_count(m);
  std::vector<OrderedTuple> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Mask g = generator_mask(i);
    OrderedTuple t;
    for (int p = 0; p < m; ++p) {
      if (g >> p & 1u) t.push_back(alphabet[p]);
    }
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

H11Vector expand_generator(const Alphabet& alphabet, std::size_t index) {
  Mask g = generator_mask(index);
  H11Vector out{alphabet, {}};
  // Increasing tuple: removing the j-th entry (0-based) needs no re-sort.
  int j = 0;
  for (int p = 0; p < static_cast<int>(alphabet.size()); ++p) {
    if (!(g >> p & 1u)) continue;
    out.add(g & ~(Mask{1} << p), Rational(j % 2 == 0 ? 1 : -1));
    ++j;
  }
  return out;
}

}  // namespace

H11Vector expand_generators(const Alphabet& alphabet, const ratlin::Vector& coeffs) {
  int m = static_cast<int>(alphabet.size());
  if (coeffs.size() != generator_count(m)) throw std::invalid_argument("generator coefficient length mismatch");
  H11Vector out{alphabet, {}};
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    Mask g = generator_mask(i);
    int j = 0;
    for (int p = 0; p < m; ++p) {
      if (!(g >> p & 1u)) continue;
      out.add(g & ~(Mask{1} << p), (j % 2 == 0) ? coeffs[i] : Rational(-coeffs[i]));
      ++j;
    }
  }
  return out;
}

std::optional<ratlin::Vector> express_in_generators(const H11Vector& v) {
  validate_alphabet(v.alphabet);
  int m = static_cast<int>(v.alphabet.size());
  if (m < 11) {
    if (v.is_zero()) return ratlin::Vector{};
    return std::nullopt;
  }
  ratlin::Vector c(generator_count(m), Rational(0));
  for (const auto& [mask, val] : v.coeffs) {
    if (std::popcount(mask) != 10 || (m < 32 && (mask >> m) != 0)) {
      throw std::invalid_argument("coordinate is not a 10-subset of the alphabet");
    }
    if (!(mask & 1u)) c[generator_index(mask | 1u)] = val;
  }
  if (expand_generators(v.alphabet, c) != v) return std::nullopt;
  return c;
}

ratlin::SparseMat generator_expansion_matrix(const Alphabet& alphabet) {
  int m = static_cast<int>(alphabet.size());
  std::size_t rows = static_cast<std::size_t>(binom64(m, 10));
  std::size_t cols = generator_count(m);
  std::vector<ratlin::Triplet> t;
  t.reserve(cols * 11);
  for (std::size_t i = 0; i < cols; ++i) {
    for (const auto& [mask, val] : expand_generator(alphabet, i).coeffs) {
      t.push_back({static_cast<std::size_t>(colex_rank(mask)), i, val});
    }
  }
  std::vector<std::string> rl, cl;
  rl.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) rl.push_back(subset_key(alphabet, colex_unrank(r, 10)));
  for (std::size_t i = 0; i < cols; ++i) cl.push_back("w[" + subset_key(alphabet, generator_mask(i)) + "]");
  return ratlin::SparseMat(std::move(rl), std::move(cl), std::move(t));
}

std::optional<ratlin::Vector> express_in_generators_by_solve(const H11Vector& v) {
  validate_alphabet(v.alphabet);
  int m = static_cast<int>(v.alphabet.size());
  if (m < 11) {
    if (v.is_zero()) return ratlin::Vector{};
    return std::nullopt;
  }
  ratlin::Vector b(static_cast<std::size_t>(binom64(m, 10)), Rational(0));
  for (const auto& [mask, val] : v.coeffs) b.at(static_cast<std::size_t>(colex_rank(mask))) = val;
  return ratlin::solve(generator_expansion_matrix(v.alphabet), b);
}

bool membership_in_span(const H11Vector& v) { return express_in_generators(v).has_value(); }

H11Vector act(const std::vector<Mark>& sigma, const H11Vector& v) {
  const auto& alpha = v.alphabet;
  if (sigma.size() != alpha.size()) throw std::invalid_argument("permutation size mismatch");
  std::vector<int> image(alpha.size());
  {
    std::vector<char> hit(alpha.size(), 0);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      image[i] = position(alpha, sigma[i]);
      if (hit[image[i]]) throw std::invalid_argument("relabeling is not a bijection");
      hit[image[i]] = 1;
    }
  }
  H11Vector out{alpha, {}};
  std::vector<int> imgs;
  for (const auto& [mask, val] : v.coeffs) {
    imgs.clear();
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (mask >> i & 1u) imgs.push_back(image[i]);
    }
    int s = sort_sign(imgs);
    Mask to = 0;
    for (int p : imgs) to |= Mask{1} << p;
    out.add(to, s > 0 ? val : Rational(-val));
  }
  return out;
}

H11VectorText to_text(const H11Vector& v) {
  H11VectorText t;
  for (const auto& m : v.alphabet) t.alphabet.push_back(m.str());
  for (const auto& [mask, val] : v.coeffs) t.coeffs[subset_key(v.alphabet, mask)] = to_string(val);
  return t;
}

H11Vector from_text(const H11VectorText& t) {
  H11Vector v;
  for (const auto& s : t.alphabet) v.alphabet.push_back(Mark::parse(s));
  validate_alphabet(v.alphabet);
  for (const auto& [key, val] : t.coeffs) {
    Mask mask = 0;
    std::size_t start = 0;
    while (start <= key.size()) {
      auto comma = key.find(',', start);
      std::string item = key.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      mask |= Mask{1} << position(v.alphabet, Mark::parse(item));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (std::popcount(mask) != 10) throw std::invalid_argument("coefficient key is not a 10-subset: " + key);
    v.add(mask, parse_rational(val));
  }
  return v;
}

}  // namespace w11::specht
