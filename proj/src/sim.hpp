#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "design.hpp"
#include "ppr.hpp"
#include "relay.hpp"

namespace sparkppr {

enum class DecoderMode { Plain, WithSD };

struct ExperimentConfig {
  FieldSpec field{2};
  std::uint32_t k = 8;
  std::vector<std::uint32_t> n_values;  // coded packet counts to sweep
  std::vector<Scheme> schemes;
  DecoderMode decoder = DecoderMode::WithSD;
  ChannelParams channel;
  std::uint64_t trials = 1000;
  std::uint64_t root_seed = 1;
  std::string catalog_path;
  std::string out_path;
  std::string dump_path;  // optional: first delivered block, packet dump format
  std::uint32_t w_max = 0;  // 0: automatic (number of failed rows)
  std::uint64_t column_work_cap = 10'000'000;
  std::uint32_t workers = 1;

  void validate() const;
};

struct TrialOutcome {
  bool plain_success = false;
  bool sd_ran = false;
  bool sd_success = false;
  bool sd_rescued = false;
  // Every payload column was solved with a uniqueness certificate.
  bool condition_met = false;
  std::uint32_t repaired = 0;
  std::uint32_t repair_false_accepts = 0;
  std::uint32_t delivery_false_accepts = 0;
  bool truth_mismatch = false;
  // Per payload column: 0 unsolved, 1 solved, 2 solved with certificate.
  // Kept so rescues can be re-classified offline under other rules.
  std::vector<std::uint8_t> column_status;
};

// One end-to-end trial: draw the combination block for the scheme, encode a
// random source block, push it through the relay channel, and decode the
// delivery. The plain decoder always runs; the repair-assisted decoder runs
// on the same delivery when requested, so the two outcomes are paired.
TrialOutcome run_trial(const ExperimentConfig& config, const Catalog* catalog,
                       Scheme scheme, std::uint32_t n, std::uint64_t trial_seed,
                       Delivery* capture = nullptr);

struct CurvePoint {
  std::uint32_t n = 0;
  double p_decode = 0, ci_low = 0, ci_high = 0;  // Wilson 95%
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
};

struct DecompositionPoint {
  std::uint32_t n = 0;
  double p_cond_met = 0;      // rescued with every column certified
  double p_cond_not_met = 0;  // rescued otherwise
  std::uint64_t rescued_cert = 0;
  std::uint64_t rescued_uncert = 0;
};

struct SchemeResult {
  Scheme scheme = Scheme::RLC;
  std::vector<CurvePoint> plain;
  std::vector<CurvePoint> with_sd;              // empty in plain-only runs
  std::vector<DecompositionPoint> decomposition;  // parallel to with_sd
};

struct SimResult {
  ExperimentConfig config;
  std::string fingerprint;  // canonical-config hash, for provenance
  std::vector<SchemeResult> schemes;
  std::uint64_t outcome_digest = 0;  // fold over per-trial outcomes in trial order
};

SimResult run_experiment(const ExperimentConfig& config, const Catalog* catalog);

// Per-scheme conveniences over run_experiment; identical seeding, so values
// agree with the combined run point for point.
std::vector<CurvePoint> estimate_curve(const ExperimentConfig& config,
                                       const Catalog* catalog, Scheme scheme);
std::vector<DecompositionPoint> decompose_sd_contribution(
    const ExperimentConfig& config, const Catalog* catalog, Scheme scheme);

struct Wilson {
  double low = 0, high = 0;
};
Wilson wilson95(std::uint64_t successes, std::uint64_t trials);

// CSV export, one row per (scheme, decoder, n):
// scheme,decoder,q,K,N,M,eps,ps,L,trials,p_decode,ci_low,ci_high,
// p_cond_met,p_cond_not_met,seed
std::string results_csv(const SimResult& result);
std::string summarize(const SimResult& result);  // human-readable digest

std::string config_fingerprint(const ExperimentConfig& config);

}  // namespace sparkppr
