#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "code.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace sparkppr {

enum class Scheme { RLC, MSLC, OSPRLC };

const char* scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

// Thrown when an exact-balance requirement cannot be met.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CatalogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DesignSearchConfig {
  std::uint64_t budget = 100000;  // spark evaluations
  std::uint64_t seed = 1;
  std::uint32_t workers = 1;
  // Mutation evaluations per random restart of the hill climb.
  std::uint32_t restart_steps = 4000;
};

struct SparkSearchOutcome {
  std::uint32_t best_spark = 0;
  // All found combination blocks achieving best_spark, deduplicated and
  // sorted lexicographically.
  std::vector<FqMatrix> matrices;
  bool exhaustive = false;
  std::uint64_t evaluations = 0;
};

// Searches for (n-k) x k combination blocks maximizing the spark of the
// transposed parity-check matrix [-P | I]. Exhaustive when the candidate
// space has at most 2^20 elements, otherwise seeded hill climbing with
// restarts: single-entry mutations, accepted whenever the spark does not
// decrease; each restart reports the best visited matrix ranked by spark,
// then by closeness of its element proportions to the uniform 1/q.
SparkSearchOutcome search_max_spark(const FieldSpec& field, std::uint32_t k,
                                    std::uint32_t epsilon,
                                    const DesignSearchConfig& cfg);

// Among equal-spark candidates, the one whose element proportions deviate
// least (in summed squares) from 1/q; ties broken lexicographically.
FqMatrix select_mslc(const std::vector<FqMatrix>& candidates);

// Pair of combination blocks whose averaged element proportions equal 1/q
// exactly for every field element: the unconstrained best plus a
// maximal-spark partner holding exactly the complementary element counts.
// Throws InfeasibleError when no exact-balance partner can exist.
std::vector<FqMatrix> build_osprlc_set(const FieldSpec& field, std::uint32_t k,
                                       std::uint32_t epsilon,
                                       const DesignSearchConfig& cfg);

struct CatalogMatrix {
  FqMatrix parity;
  std::uint32_t spark = 0;
  std::vector<Rational> poe;  // indexed by field element
};

struct CatalogEntry {
  Scheme scheme = Scheme::MSLC;
  std::uint32_t epsilon = 0;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  std::vector<CatalogMatrix> matrices;

  std::uint32_t lowest_spark() const;
  std::uint32_t highest_spark() const;
  Rational poe_delta(std::uint32_t delta) const;  // set mean
};

struct Catalog {
  FieldSpec field{2};
  std::uint32_t k = 0;
  std::vector<CatalogEntry> entries;  // sorted by (scheme, epsilon)

  const CatalogEntry* find(Scheme scheme, std::uint32_t epsilon) const;
};

// Builds a catalog over the contiguous redundancy range 1..eps_max for the
// requested schemes, sharing the unconstrained search per redundancy.
Catalog build_catalog(const FieldSpec& field, std::uint32_t k,
                      std::span<const Scheme> schemes, std::uint32_t eps_max,
                      const DesignSearchConfig& cfg);

std::string catalog_to_json(const Catalog& catalog);
// Parses and fully re-verifies a catalog: every stored spark is rechecked
// with the capped subset search, stored proportions are recomputed, and
// exact set balance is re-asserted; any mismatch rejects the file with the
// offending entry named.
Catalog catalog_from_json(const std::string& text);

void save_catalog(const Catalog& catalog, const std::string& path);
Catalog load_catalog(const std::string& path);

// Combination block for one encoding: the single stored matrix for MSLC, a
// uniform draw for OSPRLC. RLC does not use catalogs.
FqMatrix sample_design(const Catalog& catalog, Scheme scheme,
                       std::uint32_t epsilon, Rng& rng);

}  // namespace sparkppr
