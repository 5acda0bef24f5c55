#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "matrix.hpp"
#include "rational.hpp"

namespace sparkppr {

// Systematic (n, k) linear code over a prime field, defined by the
// (n-k) x k combination block P: the first k coded packets are the source
// packets themselves, the remaining n-k are linear combinations taken
// through P.
struct SystematicCode {
  FieldSpec field;
  std::uint32_t k;  // source packets
  std::uint32_t n;  // coded packets
  FqMatrix parity;  // (n-k) x k block P

  SystematicCode(FieldSpec field, std::uint32_t k, std::uint32_t n,
                 FqMatrix parity);

  std::uint32_t redundancy() const { return n - k; }

  // n x k generator [I_k stacked above P]; full column rank by construction.
  FqMatrix generator() const;
  // n x (n-k) parity-check H = [-P | I]^T, so that H^T * generator() = 0.
  FqMatrix parity_check() const;
};

struct SparkResult {
  enum class Kind { Finite, Unbounded, ExceedsCap };
  Kind kind = Kind::Unbounded;
  std::uint32_t value = 0;  // Finite: the spark; ExceedsCap: the cap searched
  // Finite only: the first dependent column set in enumeration order,
  // 0-based column indices.
  std::vector<std::uint32_t> witness;

  bool finite() const { return kind == Kind::Finite; }
  bool unbounded() const { return kind == Kind::Unbounded; }
};

// Smallest number of linearly dependent columns of `a`, found by direct
// subset enumeration: sizes 1, 2, ... in increasing order, subsets of each
// size in lexicographic order, so the reported witness is deterministic.
// Returns Unbounded when every column subset up to min(cols, rows+1) is
// independent. With `cap`, sizes above the cap are not searched and
// ExceedsCap is returned instead.
SparkResult spark_subset_search(const FqMatrix& a,
                                std::optional<std::uint32_t> cap = std::nullopt);

// Spark of parity_check()^T computed by scanning all q^k - 1 nonzero
// codewords for the minimum Hamming weight. Independent of the subset
// search; the two cross-check each other. Throws when q^k > 2^24.
std::uint32_t spark_via_codewords(const SystematicCode& code);

// Threshold query: true iff spark(a) > t. Used for solution-uniqueness
// certificates, where the exact spark is not needed. Internally picks
// between exact null-space enumeration (cheap when the null space is small)
// and the capped subset search.
bool spark_exceeds(const FqMatrix& a, std::uint32_t t);

// Proportion of entries of `p` equal to `delta`, as an exact rational.
Rational poe_matrix(const FqMatrix& p, std::uint32_t delta);
// Mean of poe_matrix over a non-empty set of equally shaped matrices.
Rational poe_set(std::span<const FqMatrix> set, std::uint32_t delta);

namespace detail {

// Minimum Hamming weight over all nonzero F_2-combinations of the given
// column masks (Gray-code walk, 2^k - 1 steps). Masks hold at most 64 bits.
std::uint32_t min_codeword_weight_gf2(std::span<const std::uint64_t> cols);

struct WeightProfile {
  std::uint32_t min_weight = 0;
  std::uint64_t multiplicity = 0;  // combinations achieving min_weight
};

// Same walk, but also counts how many combinations sit at the minimum; the
// count is the search-guidance signal for plateau moves.
WeightProfile min_codeword_profile_gf2(std::span<const std::uint64_t> cols);

struct NullSpaceGf2 {
  std::uint32_t dim = 0;
  std::vector<std::uint64_t> basis;  // one mask per free column, cols <= 64
};

// Null space basis of `a` over F_2; requires a.cols() <= 64.
NullSpaceGf2 null_space_gf2(const FqMatrix& a);

}  // namespace detail

}  // namespace sparkppr
