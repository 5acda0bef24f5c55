#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "code.hpp"
#include "matrix.hpp"
#include "relay.hpp"

namespace sparkppr {

// Everything the receiver holds for one coded block: the stored packets,
// the checksum verdict split into pass/fail row sets, and the stored
// checksums needed to confirm repairs.
struct ReceptionState {
  SystematicCode code;
  FqMatrix stored;                      // n x L delivered packets
  std::vector<std::uint32_t> crc_pass;  // ascending row indices
  std::vector<std::uint32_t> crc_fail;  // ascending complement
  std::vector<std::uint16_t> crcs;      // stored checksum per row
  SymbolPacking packing = SymbolPacking::ByteRaw;
};

ReceptionState make_reception_state(SystematicCode code, const Delivery& d,
                                    SymbolPacking packing);

// Syndrome of the stored block: parity_check^T * stored, one column per
// payload position. Zero exactly when the stored block is a codeword.
FqMatrix compute_syndrome(const SystematicCode& code, const FqMatrix& stored);

// Rows of the parity-check matrix restricted to the given row set, order
// preserved.
FqMatrix restrict_parity(const SystematicCode& code,
                         std::span<const std::uint32_t> rows);

// Memoized "spark greater than t" queries against one fixed matrix.
class SparkThresholds {
 public:
  explicit SparkThresholds(FqMatrix a);
  bool exceeds(std::uint32_t t);

 private:
  FqMatrix a_;
  bool resolved_ = false;
  bool unbounded_ = false;
  std::optional<std::uint32_t> exact_;
  std::map<std::uint32_t, bool> cache_;
};

struct ColumnSolution {
  std::vector<std::uint32_t> error;  // candidate error column, one entry per failed row
  std::uint32_t weight = 0;
  // Weight is provably below half the spark, so this is the unique minimum
  // weight solution.
  bool certified_unique = false;
  // A second solution of equal weight exists.
  bool ambiguous = false;
};

struct ColumnSolveOutcome {
  std::optional<ColumnSolution> solution;
  bool hit_work_cap = false;  // enumeration aborted; absence of a solution or
                              // of ambiguity is then unverified
  std::uint64_t candidates = 0;
};

// Minimum-weight solution w of h_fail_t * w = syndrome_col, by direct
// enumeration of candidate weights 0, 1, ...: supports in lexicographic
// order, nonzero values in odometer order. The first hit is returned and
// the rest of its weight level is scanned for an equal-weight alternative.
ColumnSolveOutcome solve_min_weight(const FqMatrix& h_fail_t,
                                    std::span<const std::uint32_t> syndrome_col,
                                    std::uint32_t w_max, std::uint64_t work_cap,
                                    SparkThresholds& thresholds);

struct ColumnReport {
  enum class Status { Solved, NoSolution, WorkCapped };
  Status status = Status::NoSolution;
  std::uint32_t weight = 0;
  bool certified_unique = false;
  bool ambiguous = false;
};

struct RepairOptions {
  std::uint32_t w_max = 0;  // 0: up to the number of failed rows
  std::uint64_t column_work_cap = 10'000'000;
  const FqMatrix* ground_truth = nullptr;  // simulation instrumentation only
};

struct RepairOutcome {
  std::uint32_t repaired = 0;  // rows whose checksum verified after repair
  std::vector<std::uint32_t> repaired_rows;
  std::vector<ColumnReport> columns;  // one per payload position
  std::uint32_t unsolved_columns = 0;
  std::uint32_t work_cap_hits = 0;
  std::uint32_t false_accepts = 0;  // repaired rows that differ from ground truth
};

// One repair pass: solves every syndrome column, assembles the error
// estimate (unsolved columns contribute zeros), subtracts it from the
// failed rows and re-verifies checksums. Rows that verify move from the
// fail set to the pass set and their stored payload is replaced.
RepairOutcome repair(ReceptionState& state, const FqMatrix& syndrome,
                     const RepairOptions& opt);

struct DecodeOptions {
  bool use_sd = true;
  RepairOptions repair;
};

struct DecodeReport {
  bool success = false;
  bool sd_invoked = false;
  bool sd_rescued = false;  // plain path failed, repair made decoding succeed
  std::uint32_t repaired = 0;
  std::uint32_t false_accepts = 0;
  bool all_columns_certified = false;
  std::vector<ColumnReport> columns;  // empty unless repair ran
  std::optional<FqMatrix> source;     // recovered source block on success
};

// Decoding pipeline: recover the source block from checksum-passing rows
// when they already have full rank; otherwise (with use_sd) compute the
// syndrome, repair failed rows, and retry. Success always implies the
// recovered block reproduces every checksum-passing stored row exactly.
DecodeReport decode(const ReceptionState& state, const DecodeOptions& opt);

}  // namespace sparkppr
