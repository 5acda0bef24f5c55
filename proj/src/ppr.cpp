#include "ppr.hpp"

#include <algorithm>
#include <stdexcept>

namespace sparkppr {

ReceptionState make_reception_state(SystematicCode code, const Delivery& d,
                                    SymbolPacking packing) {
  if (d.stored.rows() != code.n)
    throw std::invalid_argument("delivery row count does not match the code");
  return ReceptionState{std::move(code), d.stored, d.crc_pass, d.crc_fail,
                        d.crcs, packing};
}

FqMatrix compute_syndrome(const SystematicCode& code, const FqMatrix& stored) {
  if (stored.rows() != code.n)
    throw std::invalid_argument("syndrome: stored block must have n rows");
  return mat_mul(code.parity_check().transposed(), stored);
}

FqMatrix restrict_parity(const SystematicCode& code,
                         std::span<const std::uint32_t> rows) {
  return code.parity_check().select_rows(rows);
}

SparkThresholds::SparkThresholds(FqMatrix a) : a_(std::move(a)) {}

bool SparkThresholds::exceeds(std::uint32_t t) {
  if (!resolved_) {
    resolved_ = true;
    if (a_.cols() == 0) {
      unbounded_ = true;
    } else if (a_.field().q() == 2 && a_.cols() <= 64) {
      const auto ns = detail::null_space_gf2(a_);
      if (ns.dim == 0) {
        unbounded_ = true;
      } else if (ns.dim <= 22) {
        exact_ = detail::min_codeword_weight_gf2(ns.basis);
      }
    } else if (rank(a_) == a_.cols()) {
      unbounded_ = true;
    }
  }
  if (unbounded_) return true;
  if (exact_) return *exact_ > t;
  const auto it = cache_.find(t);
  if (it != cache_.end()) return it->second;
  const bool v = spark_exceeds(a_, t);
  cache_.emplace(t, v);
  return v;
}

namespace {

// Shared support enumerator: size-t index combinations of {0..n-1} in
// lexicographic order. `body(depth)` is told the lowest changed position so
// prefix sums can be reused; it returns false to stop the walk.
template <typename Body>
void for_each_support(std::uint32_t n, std::uint32_t t, Body&& body) {
  std::vector<std::uint32_t> idx(t);
  for (std::uint32_t i = 0; i < t; ++i) idx[i] = i;
  if (idx.back() >= n) return;
  std::uint32_t changed = 0;
  for (;;) {
    if (!body(idx, changed)) return;
    std::uint32_t i = t;
    bool advanced = false;
    while (i-- > 0) {
      if (idx[i] + (t - i) < n) {
        ++idx[i];
        for (std::uint32_t j = i + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
        changed = i;
        advanced = true;
        break;
      }
    }
    if (!advanced) return;
  }
}

struct SearchState {
  std::optional<ColumnSolution> first;
  bool ambiguous = false;
  std::uint64_t candidates = 0;
  bool capped = false;
};

// Binary fast path: columns and syndrome fit single machine words.
void search_weight_gf2(std::span<const std::uint64_t> masks, std::uint64_t target,
                       std::uint32_t t, std::uint64_t work_cap, SearchState& st) {
  const auto n = static_cast<std::uint32_t>(masks.size());
  std::vector<std::uint64_t> prefix(t + 1, 0);
  for_each_support(n, t, [&](const std::vector<std::uint32_t>& idx,
                             std::uint32_t changed) {
    for (std::uint32_t d = changed; d < t; ++d)
      prefix[d + 1] = prefix[d] ^ masks[idx[d]];
    if (++st.candidates > work_cap) {
      st.capped = true;
      return false;
    }
    if (prefix[t] == target) {
      if (!st.first) {
        ColumnSolution sol;
        sol.error.assign(n, 0);
        for (std::uint32_t i : idx) sol.error[i] = 1;
        sol.weight = t;
        st.first = std::move(sol);
      } else {
        st.ambiguous = true;
        return false;
      }
    }
    return true;
  });
}

void search_weight_generic(const FqMatrix& h_t,
                           std::span<const std::uint32_t> target,
                           std::uint32_t t, std::uint64_t work_cap,
                           SearchState& st) {
  const FieldSpec& f = h_t.field();
  const std::uint32_t q = f.q();
  const std::uint32_t n = h_t.cols();
  const std::uint32_t m = h_t.rows();
  std::vector<std::uint32_t> sum(m);
  for_each_support(n, t, [&](const std::vector<std::uint32_t>& idx,
                             std::uint32_t) {
    // Nonzero values cycle through (F_q \ {0})^t, last position fastest.
    std::vector<std::uint32_t> vals(t, 1);
    for (;;) {
      if (++st.candidates > work_cap) {
        st.capped = true;
        return false;
      }
      std::fill(sum.begin(), sum.end(), 0);
      for (std::uint32_t d = 0; d < t; ++d)
        for (std::uint32_t r = 0; r < m; ++r)
          sum[r] = f.add(sum[r], f.mul(vals[d], h_t.at(r, idx[d])));
      if (std::equal(sum.begin(), sum.end(), target.begin())) {
        if (!st.first) {
          ColumnSolution sol;
          sol.error.assign(n, 0);
          for (std::uint32_t d = 0; d < t; ++d) sol.error[idx[d]] = vals[d];
          sol.weight = t;
          st.first = std::move(sol);
        } else {
          st.ambiguous = true;
          return false;
        }
      }
      std::uint32_t pos = t;
      bool more = false;
      while (pos-- > 0) {
        if (vals[pos] < q - 1) {
          ++vals[pos];
          for (std::uint32_t j = pos + 1; j < t; ++j) vals[j] = 1;
          more = true;
          break;
        }
      }
      if (!more) return true;
    }
  });
}

}  // namespace

ColumnSolveOutcome solve_min_weight(const FqMatrix& h_fail_t,
                                    std::span<const std::uint32_t> syndrome_col,
                                    std::uint32_t w_max, std::uint64_t work_cap,
                                    SparkThresholds& thresholds) {
  if (syndrome_col.size() != h_fail_t.rows())
    throw std::invalid_argument("syndrome column length mismatch");
  const std::uint32_t n = h_fail_t.cols();
  if (w_max > n) w_max = n;

  ColumnSolveOutcome out;
  bool zero_syndrome = true;
  for (std::uint32_t v : syndrome_col) zero_syndrome &= v == 0;
  if (zero_syndrome) {
    ColumnSolution sol;
    sol.error.assign(n, 0);
    sol.weight = 0;
    sol.certified_unique = thresholds.exceeds(0);
    out.solution = std::move(sol);
    out.candidates = 1;
    return out;
  }

  // Nothing to enumerate or a provably unsolvable system: bail out before
  // walking the candidate space.
  if (n == 0) return out;
  {
    FqMatrix rhs(h_fail_t.field(), h_fail_t.rows(), 1);
    for (std::uint32_t r = 0; r < h_fail_t.rows(); ++r)
      rhs.set(r, 0, syndrome_col[r]);
    if (rank(h_fail_t) != rank(h_fail_t.hstack(rhs))) return out;
  }

  const bool fast = h_fail_t.field().q() == 2 && h_fail_t.rows() <= 64;
  std::vector<std::uint64_t> masks;
  std::uint64_t target = 0;
  if (fast) {
    masks.assign(n, 0);
    for (std::uint32_t c = 0; c < n; ++c)
      for (std::uint32_t r = 0; r < h_fail_t.rows(); ++r)
        if (h_fail_t.at(r, c)) masks[c] |= 1ull << r;
    for (std::uint32_t r = 0; r < h_fail_t.rows(); ++r)
      if (syndrome_col[r]) target |= 1ull << r;
  }

  SearchState st;
  for (std::uint32_t t = 1; t <= w_max; ++t) {
    if (fast)
      search_weight_gf2(masks, target, t, work_cap, st);
    else
      search_weight_generic(h_fail_t, syndrome_col, t, work_cap, st);
    out.candidates = st.candidates;
    out.hit_work_cap = st.capped;
    if (st.first) {
      st.first->ambiguous = st.ambiguous;
      st.first->certified_unique = thresholds.exceeds(2 * st.first->weight);
      out.solution = std::move(st.first);
      return out;
    }
    if (st.capped) return out;
  }
  return out;
}

RepairOutcome repair(ReceptionState& state, const FqMatrix& syndrome,
                     const RepairOptions& opt) {
  if (state.crc_fail.empty())
    throw std::invalid_argument("repair requires at least one failed row");
  const SystematicCode& code = state.code;
  const std::uint32_t q = code.field.q();
  if (syndrome.rows() != code.redundancy() ||
      syndrome.cols() != state.stored.cols())
    throw std::invalid_argument("syndrome shape mismatch");

  const std::vector<std::uint32_t> fail = state.crc_fail;
  const auto nf = static_cast<std::uint32_t>(fail.size());
  const std::uint32_t len = state.stored.cols();
  const FqMatrix h_fail_t = restrict_parity(code, fail).transposed();
  SparkThresholds thresholds(h_fail_t);
  const std::uint32_t w_max = opt.w_max == 0 ? nf : std::min(opt.w_max, nf);

  RepairOutcome out;
  out.columns.resize(len);
  FqMatrix estimate(code.field, nf, len);
  std::vector<std::uint32_t> syndrome_col(code.redundancy());
  for (std::uint32_t j = 0; j < len; ++j) {
    for (std::uint32_t r = 0; r < code.redundancy(); ++r)
      syndrome_col[r] = syndrome.at(r, j);
    const ColumnSolveOutcome res =
        solve_min_weight(h_fail_t, syndrome_col, w_max, opt.column_work_cap,
                         thresholds);
    ColumnReport& rep = out.columns[j];
    if (res.hit_work_cap) ++out.work_cap_hits;
    if (res.solution) {
      rep.status = ColumnReport::Status::Solved;
      rep.weight = res.solution->weight;
      rep.certified_unique = res.solution->certified_unique;
      rep.ambiguous = res.solution->ambiguous;
      for (std::uint32_t i = 0; i < nf; ++i)
        estimate.set(i, j, res.solution->error[i]);
    } else {
      rep.status = res.hit_work_cap ? ColumnReport::Status::WorkCapped
                                    : ColumnReport::Status::NoSolution;
      ++out.unsolved_columns;
      // Estimate stays zero: the checksum will reject the row unless it was
      // error free at this position anyway.
    }
  }

  // Candidate payloads for the failed rows, then checksum arbitration.
  std::vector<std::uint32_t> row(len);
  std::vector<std::uint32_t> still_failed;
  for (std::uint32_t i = 0; i < nf; ++i) {
    const std::uint32_t r = fail[i];
    for (std::uint32_t j = 0; j < len; ++j)
      row[j] = code.field.sub(state.stored.at(r, j), estimate.at(i, j));
    if (payload_crc(row, q, state.packing) == state.crcs[r]) {
      out.repaired_rows.push_back(r);
      for (std::uint32_t j = 0; j < len; ++j) state.stored.set(r, j, row[j]);
      if (opt.ground_truth) {
        bool match = true;
        for (std::uint32_t j = 0; j < len && match; ++j)
          match = row[j] == opt.ground_truth->at(r, j);
        if (!match) ++out.false_accepts;
      }
    } else {
      still_failed.push_back(r);
    }
  }
  out.repaired = static_cast<std::uint32_t>(out.repaired_rows.size());
  if (out.repaired) {
    std::vector<std::uint32_t> pass = state.crc_pass;
    pass.insert(pass.end(), out.repaired_rows.begin(), out.repaired_rows.end());
    std::sort(pass.begin(), pass.end());
    state.crc_pass = std::move(pass);
    state.crc_fail = std::move(still_failed);
  }
  return out;
}

namespace {

bool solve_from_pass_rows(const ReceptionState& state, DecodeReport& rep) {
  const FqMatrix gen = state.code.generator();
  const FqMatrix g_pass = gen.select_rows(state.crc_pass);
  if (rank(g_pass) != state.code.k) return false;
  const FqMatrix y_pass = state.stored.select_rows(state.crc_pass);
  SolveResult sol = solve_unique(g_pass, y_pass);
  if (!sol.unique()) return false;  // checksum collision poisoned a row
  rep.success = true;
  rep.source = std::move(sol.solution);
  return true;
}

}  // namespace

DecodeReport decode(const ReceptionState& state, const DecodeOptions& opt) {
  DecodeReport rep;
  if (solve_from_pass_rows(state, rep)) return rep;
  if (!opt.use_sd || state.crc_fail.empty()) return rep;

  rep.sd_invoked = true;
  ReceptionState work = state;
  const FqMatrix syndrome = compute_syndrome(state.code, state.stored);
  const RepairOutcome outcome = repair(work, syndrome, opt.repair);
  rep.repaired = outcome.repaired;
  rep.false_accepts = outcome.false_accepts;
  rep.columns = outcome.columns;
  rep.all_columns_certified = true;
  for (const ColumnReport& c : rep.columns) {
    rep.all_columns_certified &=
        c.status == ColumnReport::Status::Solved && c.certified_unique;
  }
  if (solve_from_pass_rows(work, rep)) {
    rep.sd_rescued = true;
    return rep;
  }
  return rep;
}

}  // namespace sparkppr
