#include "code.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace sparkppr {

SystematicCode::SystematicCode(FieldSpec field_, std::uint32_t k_,
                               std::uint32_t n_, FqMatrix parity_)
    : field(field_), k(k_), n(n_), parity(std::move(parity_)) {
  if (n <= k) throw std::invalid_argument("systematic code requires n > k");
  if (!(parity.field() == field))
    throw std::invalid_argument("combination block field mismatch");
  if (parity.rows() != n - k || parity.cols() != k)
    throw std::invalid_argument("combination block must be (n-k) x k");
}

FqMatrix SystematicCode::generator() const {
  return FqMatrix::identity(field, k).vstack(parity);
}

FqMatrix SystematicCode::parity_check() const {
  return parity.negated().hstack(FqMatrix::identity(field, n - k)).transposed();
}

namespace {

// Advances `idx` to the next size-s combination of {0..n-1} in
// lexicographic order. Returns false after the last combination.
bool next_combination(std::vector<std::uint32_t>& idx, std::uint32_t n) {
  const auto s = static_cast<std::uint32_t>(idx.size());
  std::uint32_t i = s;
  while (i-- > 0) {
    if (idx[i] + (s - i) < n) {
      ++idx[i];
      for (std::uint32_t j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

SparkResult spark_subset_search(const FqMatrix& a,
                                std::optional<std::uint32_t> cap) {
  const std::uint32_t cols = a.cols();
  // Any rows+1 columns are dependent, so nothing above this limit needs a
  // look; if even that size is independent the columns are independent
  // outright.
  const std::uint32_t natural_limit = std::min(cols, a.rows() + 1);
  const std::uint32_t limit = cap ? std::min(*cap, natural_limit) : natural_limit;
  for (std::uint32_t s = 1; s <= limit; ++s) {
    std::vector<std::uint32_t> idx(s);
    for (std::uint32_t i = 0; i < s; ++i) idx[i] = i;
    do {
      if (rank(a.select_cols(idx)) < s) {
        SparkResult r;
        r.kind = SparkResult::Kind::Finite;
        r.value = s;
        r.witness = idx;
        return r;
      }
    } while (next_combination(idx, cols));
  }
  if (cap && *cap < natural_limit) {
    SparkResult r;
    r.kind = SparkResult::Kind::ExceedsCap;
    r.value = *cap;
    return r;
  }
  return SparkResult{};  // Unbounded: all columns independent
}

namespace detail {

std::uint32_t min_codeword_weight_gf2(std::span<const std::uint64_t> cols) {
  const auto k = static_cast<std::uint32_t>(cols.size());
  std::uint64_t acc = 0;
  std::uint32_t best = ~0u;
  const std::uint64_t total = 1ull << k;
  for (std::uint64_t i = 1; i < total; ++i) {
    acc ^= cols[std::countr_zero(i)];
    const auto w = static_cast<std::uint32_t>(std::popcount(acc));
    if (w < best) best = w;
  }
  return best;
}

WeightProfile min_codeword_profile_gf2(std::span<const std::uint64_t> cols) {
  const auto k = static_cast<std::uint32_t>(cols.size());
  std::uint64_t acc = 0;
  WeightProfile p{~0u, 0};
  const std::uint64_t total = 1ull << k;
  for (std::uint64_t i = 1; i < total; ++i) {
    acc ^= cols[std::countr_zero(i)];
    const auto w = static_cast<std::uint32_t>(std::popcount(acc));
    if (w < p.min_weight) {
      p.min_weight = w;
      p.multiplicity = 1;
    } else if (w == p.min_weight) {
      ++p.multiplicity;
    }
  }
  return p;
}

NullSpaceGf2 null_space_gf2(const FqMatrix& a) {
  if (a.cols() > 64) throw std::invalid_argument("null space: too many columns");
  const std::uint32_t cols = a.cols();
  // Reduced row echelon form on bit-packed rows (columns fit one word).
  std::vector<std::uint64_t> rows(a.rows(), 0);
  for (std::uint32_t r = 0; r < a.rows(); ++r)
    for (std::uint32_t c = 0; c < cols; ++c)
      if (a.at(r, c)) rows[r] |= 1ull << c;

  std::vector<std::int32_t> pivot_of_col(cols, -1);
  std::uint32_t rank_rows = 0;
  for (std::uint32_t c = 0; c < cols && rank_rows < rows.size(); ++c) {
    const std::uint64_t mask = 1ull << c;
    std::uint32_t pivot = rank_rows;
    while (pivot < rows.size() && !(rows[pivot] & mask)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank_rows]);
    for (std::uint32_t i = 0; i < rows.size(); ++i)
      if (i != rank_rows && (rows[i] & mask)) rows[i] ^= rows[rank_rows];
    pivot_of_col[c] = static_cast<std::int32_t>(rank_rows);
    ++rank_rows;
  }

  NullSpaceGf2 ns;
  for (std::uint32_t c = 0; c < cols; ++c) {
    if (pivot_of_col[c] >= 0) continue;
    // Free column: one basis vector with a 1 there, pivots filled in from
    // the reduced rows.
    std::uint64_t v = 1ull << c;
    for (std::uint32_t pc = 0; pc < cols; ++pc) {
      if (pivot_of_col[pc] >= 0 &&
          (rows[static_cast<std::uint32_t>(pivot_of_col[pc])] & (1ull << c)))
        v |= 1ull << pc;
    }
    ns.basis.push_back(v);
  }
  ns.dim = static_cast<std::uint32_t>(ns.basis.size());
  return ns;
}

}  // namespace detail

std::uint32_t spark_via_codewords(const SystematicCode& code) {
  const std::uint32_t q = code.field.q();
  // Enumeration guard: q^k must stay within 2^24 evaluations.
  double total = 1.0;
  for (std::uint32_t i = 0; i < code.k; ++i) total *= q;
  if (total > static_cast<double>(1u << 24))
    throw std::invalid_argument("codeword enumeration bound exceeded (q^k > 2^24)");

  const FqMatrix gen = code.generator();
  if (q == 2 && code.n <= 64) {
    std::vector<std::uint64_t> cols(code.k, 0);
    for (std::uint32_t c = 0; c < code.k; ++c)
      for (std::uint32_t r = 0; r < code.n; ++r)
        if (gen.at(r, c)) cols[c] |= 1ull << r;
    return detail::min_codeword_weight_gf2(cols);
  }

  // Odometer over nonzero source vectors u, codeword = gen * u.
  std::vector<std::uint32_t> u(code.k, 0);
  std::vector<std::uint32_t> word(code.n, 0);
  const FieldSpec& f = code.field;
  std::uint32_t best = ~0u;
  for (;;) {
    std::uint32_t pos = 0;
    while (pos < code.k && u[pos] == q - 1) u[pos++] = 0;
    if (pos == code.k) break;
    ++u[pos];
    std::fill(word.begin(), word.end(), 0);
    for (std::uint32_t c = 0; c < code.k; ++c) {
      if (u[c] == 0) continue;
      for (std::uint32_t r = 0; r < code.n; ++r)
        word[r] = f.add(word[r], f.mul(u[c], gen.at(r, c)));
    }
    std::uint32_t w = 0;
    for (std::uint32_t r = 0; r < code.n; ++r) w += word[r] != 0;
    if (w < best) best = w;
  }
  return best;
}

bool spark_exceeds(const FqMatrix& a, std::uint32_t t) {
  if (a.cols() == 0) return true;
  if (a.field().q() == 2 && a.cols() <= 64) {
    const auto ns = detail::null_space_gf2(a);
    if (ns.dim == 0) return true;  // independent columns, spark unbounded
    if (ns.dim <= 22) {
      return detail::min_codeword_weight_gf2(ns.basis) > t;
    }
  }
  const SparkResult r = spark_subset_search(a, t);
  switch (r.kind) {
    case SparkResult::Kind::Finite:
      return false;
    case SparkResult::Kind::ExceedsCap:
    case SparkResult::Kind::Unbounded:
      return true;
  }
  return true;
}

Rational poe_matrix(const FqMatrix& p, std::uint32_t delta) {
  if (delta >= p.field().q())
    throw std::invalid_argument("poe: element outside field");
  if (p.empty()) throw std::invalid_argument("poe of an empty matrix");
  std::int64_t count = 0;
  for (std::uint32_t e : p.entries()) count += e == delta;
  return Rational(count, static_cast<std::int64_t>(p.rows()) * p.cols());
}

Rational poe_set(std::span<const FqMatrix> set, std::uint32_t delta) {
  if (set.empty()) throw std::invalid_argument("poe of an empty set");
  Rational sum;
  for (const FqMatrix& p : set) {
    if (p.rows() != set.front().rows() || p.cols() != set.front().cols())
      throw std::invalid_argument("poe set members must share one shape");
    sum = sum + poe_matrix(p, delta);
  }
  return sum / Rational(static_cast<std::int64_t>(set.size()));
}

}  // namespace sparkppr
