#include "design.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <functional>
#include <thread>

#include "json.hpp"

namespace sparkppr {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::RLC: return "RLC";
    case Scheme::MSLC: return "MSLC";
    case Scheme::OSPRLC: return "OSPRLC";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "RLC") return Scheme::RLC;
  if (name == "MSLC") return Scheme::MSLC;
  if (name == "OSPRLC") return Scheme::OSPRLC;
  return std::nullopt;
}

namespace {

// Spark, plus how many dependent sets realize it, for one candidate shape.
// The multiplicity breaks plateau ties during hill climbing: walking the
// count of minimum-weight codewords down leads the search toward states
// where the spark can actually jump. The binary case walks the nonzero
// codeword space with a Gray code; other fields fall back to the generic
// algorithms (with no multiplicity signal).
struct EvalProfile {
  std::uint32_t spark = 0;
  std::uint64_t multiplicity = 1;
};

class SparkEvaluator {
 public:
  SparkEvaluator(const FieldSpec& field, std::uint32_t k, std::uint32_t eps)
      : field_(field), k_(k), eps_(eps), n_(k + eps),
        fast_(field.q() == 2 && n_ <= 64 && k_ <= 24), cols_(k) {}

  EvalProfile eval(std::span<const std::uint32_t> entries) {
    if (fast_) {
      for (std::uint32_t c = 0; c < k_; ++c) cols_[c] = 1ull << c;
      for (std::uint32_t r = 0; r < eps_; ++r) {
        const std::uint32_t* row = entries.data() + static_cast<std::size_t>(r) * k_;
        for (std::uint32_t c = 0; c < k_; ++c)
          if (row[c]) cols_[c] |= 1ull << (k_ + r);
      }
      const auto p = detail::min_codeword_profile_gf2(cols_);
      return {p.min_weight, p.multiplicity};
    }
    FqMatrix p(field_, eps_, k_,
               std::vector<std::uint32_t>(entries.begin(), entries.end()));
    SystematicCode code(field_, k_, n_, std::move(p));
    double space = 1.0;
    for (std::uint32_t i = 0; i < k_ && space <= (1u << 24); ++i)
      space *= field_.q();
    if (space <= (1u << 24)) return {spark_via_codewords(code), 1};
    return {spark_subset_search(code.parity_check().transposed()).value, 1};
  }

  std::uint32_t eval_spark(std::span<const std::uint32_t> entries) {
    return eval(entries).spark;
  }

 private:
  FieldSpec field_;
  std::uint32_t k_, eps_, n_;
  bool fast_;
  std::vector<std::uint64_t> cols_;
};

// Integer-exact deviation of the element proportions from uniform:
// sum over field elements of (q*count - total)^2. Orders candidates the
// same way as the summed squared deviation of proportions from 1/q.
std::uint64_t proportion_deviation(std::span<const std::uint32_t> entries,
                                   std::uint32_t q) {
  std::vector<std::int64_t> counts(q, 0);
  for (std::uint32_t e : entries) ++counts[e];
  const auto total = static_cast<std::int64_t>(entries.size());
  std::uint64_t dev = 0;
  for (std::uint32_t d = 0; d < q; ++d) {
    const std::int64_t diff = static_cast<std::int64_t>(q) * counts[d] - total;
    dev += static_cast<std::uint64_t>(diff * diff);
  }
  return dev;
}

struct RestartBest {
  std::uint32_t spark = 0;
  std::uint64_t deviation = ~0ull;
  std::vector<std::uint32_t> entries;
  std::uint64_t evaluations = 0;
};

void run_parallel(std::uint64_t jobs, std::uint32_t workers,
                  const std::function<void(std::uint64_t)>& body) {
  const std::uint32_t nw = std::max(1u, workers);
  if (nw == 1 || jobs <= 1) {
    for (std::uint64_t j = 0; j < jobs; ++j) body(j);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (std::uint32_t w = 0; w < nw; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t j = next.fetch_add(1);
        if (j >= jobs) break;
        body(j);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

SparkSearchOutcome search_max_spark(const FieldSpec& field, std::uint32_t k,
                                    std::uint32_t epsilon,
                                    const DesignSearchConfig& cfg) {
  if (k == 0 || epsilon == 0) throw std::invalid_argument("search requires k >= 1 and epsilon >= 1");
  if (cfg.budget == 0) throw std::invalid_argument("search budget must be >= 1");
  const std::uint32_t q = field.q();
  const std::uint32_t cells = epsilon * k;

  std::uint64_t space = 1;
  bool exhaustive = true;
  for (std::uint32_t i = 0; i < cells; ++i) {
    space *= q;
    if (space > (1u << 20)) {
      exhaustive = false;
      break;
    }
  }

  SparkSearchOutcome out;
  if (exhaustive) {
    out.exhaustive = true;
    out.evaluations = space;
    const std::uint32_t nw = std::max(1u, cfg.workers);
    const std::uint64_t chunk = (space + nw - 1) / nw;
    std::vector<std::uint32_t> best_spark(nw, 0);
    std::vector<std::vector<std::vector<std::uint32_t>>> best_lists(nw);
    run_parallel(nw, nw, [&](std::uint64_t w) {
      SparkEvaluator eval(field, k, epsilon);
      std::vector<std::uint32_t> entries(cells);
      const std::uint64_t lo = w * chunk;
      const std::uint64_t hi = std::min(space, lo + chunk);
      for (std::uint64_t idx = lo; idx < hi; ++idx) {
        std::uint64_t v = idx;
        for (std::uint32_t i = 0; i < cells; ++i) {
          entries[i] = static_cast<std::uint32_t>(v % q);
          v /= q;
        }
        const std::uint32_t s = eval.eval_spark(entries);
        if (s > best_spark[w]) {
          best_spark[w] = s;
          best_lists[w].clear();
        }
        if (s == best_spark[w]) best_lists[w].push_back(entries);
      }
    });
    std::uint32_t best = 0;
    for (std::uint32_t w = 0; w < nw; ++w) best = std::max(best, best_spark[w]);
    std::vector<std::vector<std::uint32_t>> all;
    for (std::uint32_t w = 0; w < nw; ++w)
      if (best_spark[w] == best)
        for (auto& e : best_lists[w]) all.push_back(std::move(e));
    std::sort(all.begin(), all.end());
    out.best_spark = best;
    for (auto& e : all)
      out.matrices.emplace_back(field, epsilon, k, std::move(e));
    return out;
  }

  const std::uint64_t per_restart = cfg.restart_steps + 1;
  const std::uint64_t restarts = std::max<std::uint64_t>(1, cfg.budget / per_restart);
  std::vector<RestartBest> results(restarts);
  run_parallel(restarts, cfg.workers, [&](std::uint64_t r) {
    SparkEvaluator eval(field, k, epsilon);
    Rng rng(derive_seed(cfg.seed, {0x5eac, epsilon, r}));
    std::vector<std::uint32_t> cur(cells);
    for (auto& e : cur) e = static_cast<std::uint32_t>(rng.below(q));
    EvalProfile prof = eval.eval(cur);
    RestartBest best{prof.spark, proportion_deviation(cur, q), cur, 1};
    for (std::uint32_t step = 0; step < cfg.restart_steps; ++step) {
      const auto pos = static_cast<std::uint32_t>(rng.below(cells));
      const std::uint32_t old = cur[pos];
      cur[pos] = (old + 1 + static_cast<std::uint32_t>(rng.below(q - 1))) % q;
      const EvalProfile cand = eval.eval(cur);
      ++best.evaluations;
      // Accept whenever the spark does not decrease; among equal-spark
      // moves, only those not raising the minimum-weight multiplicity.
      if (cand.spark > prof.spark ||
          (cand.spark == prof.spark &&
           cand.multiplicity <= prof.multiplicity)) {
        prof = cand;
        const std::uint64_t dev = proportion_deviation(cur, q);
        if (cand.spark > best.spark ||
            (cand.spark == best.spark && dev < best.deviation) ||
            (cand.spark == best.spark && dev == best.deviation &&
             cur < best.entries)) {
          best.spark = cand.spark;
          best.deviation = dev;
          best.entries = cur;
        }
      } else {
        cur[pos] = old;
      }
    }
    results[r] = std::move(best);
  });

  std::uint32_t best = 0;
  for (const auto& r : results) best = std::max(best, r.spark);
  std::vector<std::vector<std::uint32_t>> all;
  for (auto& r : results) {
    out.evaluations += r.evaluations;
    if (r.spark == best) all.push_back(std::move(r.entries));
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  out.best_spark = best;
  for (auto& e : all) out.matrices.emplace_back(field, epsilon, k, std::move(e));
  return out;
}

FqMatrix select_mslc(const std::vector<FqMatrix>& candidates) {
  if (candidates.empty())
    throw std::invalid_argument("selection from an empty candidate list");
  const FqMatrix* best = &candidates.front();
  std::uint64_t best_dev =
      proportion_deviation(best->entries(), best->field().q());
  for (const FqMatrix& c : candidates) {
    const std::uint64_t dev = proportion_deviation(c.entries(), c.field().q());
    if (dev < best_dev || (dev == best_dev && c.lex_less(*best))) {
      best = &c;
      best_dev = dev;
    }
  }
  return *best;
}

namespace {

// Maximal-spark partner holding exactly `target` occurrences of each field
// element. Swap mutations preserve the counts, so every visited candidate
// satisfies the balance constraint by construction.
FqMatrix search_balanced_partner(const FieldSpec& field, std::uint32_t k,
                                 std::uint32_t epsilon,
                                 const std::vector<std::int64_t>& target,
                                 const FqMatrix& exclude,
                                 const DesignSearchConfig& cfg) {
  const std::uint32_t q = field.q();
  const std::uint32_t cells = epsilon * k;
  std::vector<std::uint32_t> pool;
  pool.reserve(cells);
  for (std::uint32_t d = 0; d < q; ++d)
    for (std::int64_t i = 0; i < target[d]; ++i) pool.push_back(d);

  std::uint32_t distinct = 0;
  for (std::uint32_t d = 0; d < q; ++d) distinct += target[d] > 0;
  if (distinct <= 1) {
    // Single possible arrangement.
    FqMatrix p(field, epsilon, k, pool);
    if (p == exclude)
      throw InfeasibleError(
          "exact balance forces a partner identical to the first matrix");
    return p;
  }

  const std::uint64_t per_restart = cfg.restart_steps + 1;
  const std::uint64_t restarts = std::max<std::uint64_t>(1, cfg.budget / per_restart);
  struct Best {
    std::uint32_t spark = 0;
    std::vector<std::uint32_t> entries;
  };
  std::vector<Best> results(restarts);
  const std::vector<std::uint32_t> exclude_entries(exclude.entries().begin(),
                                                   exclude.entries().end());
  run_parallel(restarts, cfg.workers, [&](std::uint64_t r) {
    SparkEvaluator eval(field, k, epsilon);
    Rng rng(derive_seed(cfg.seed, {0xba1a, epsilon, r}));
    std::vector<std::uint32_t> cur = pool;
    for (std::uint32_t i = cells - 1; i > 0; --i)
      std::swap(cur[i], cur[rng.below(i + 1)]);
    EvalProfile prof = eval.eval(cur);
    Best best;
    if (cur != exclude_entries) best = {prof.spark, cur};
    for (std::uint32_t step = 0; step < cfg.restart_steps; ++step) {
      std::uint32_t a, b;
      do {
        a = static_cast<std::uint32_t>(rng.below(cells));
        b = static_cast<std::uint32_t>(rng.below(cells));
      } while (cur[a] == cur[b]);
      std::swap(cur[a], cur[b]);
      const EvalProfile cand = eval.eval(cur);
      if (cand.spark > prof.spark ||
          (cand.spark == prof.spark &&
           cand.multiplicity <= prof.multiplicity)) {
        prof = cand;
        if (cur != exclude_entries &&
            (best.entries.empty() || cand.spark > best.spark ||
             (cand.spark == best.spark && cur < best.entries))) {
          best = {cand.spark, cur};
        }
      } else {
        std::swap(cur[a], cur[b]);
      }
    }
    results[r] = std::move(best);
  });

  const Best* chosen = nullptr;
  for (const auto& r : results) {
    if (r.entries.empty()) continue;
    if (!chosen || r.spark > chosen->spark ||
        (r.spark == chosen->spark && r.entries < chosen->entries)) {
      chosen = &r;
    }
  }
  if (!chosen)
    throw InfeasibleError("no exact-balance partner found within budget");
  return FqMatrix(field, epsilon, k, chosen->entries);
}

std::vector<FqMatrix> osprlc_from_first(const FieldSpec& field, std::uint32_t k,
                                        std::uint32_t epsilon,
                                        const FqMatrix& first,
                                        const DesignSearchConfig& cfg) {
  const std::uint32_t q = field.q();
  const std::uint32_t cells = epsilon * k;
  // Element counts the partner must hold so the pair averages to 1/q.
  const std::int64_t pair_total = 2ll * cells;
  if (pair_total % q != 0) {
    throw InfeasibleError("exact balance infeasible: 2*(n-k)*k = " +
                          std::to_string(pair_total) +
                          " is not divisible by q = " + std::to_string(q));
  }
  std::vector<std::int64_t> target(q, pair_total / q);
  for (std::uint32_t e : first.entries()) --target[e];
  for (std::uint32_t d = 0; d < q; ++d) {
    if (target[d] < 0) {
      throw InfeasibleError(
          "exact balance infeasible: element " + std::to_string(d) +
          " would need a negative count (" + std::to_string(target[d]) +
          ") in the partner matrix");
    }
  }
  FqMatrix partner = search_balanced_partner(field, k, epsilon, target, first, cfg);
  return {first, std::move(partner)};
}

}  // namespace

std::vector<FqMatrix> build_osprlc_set(const FieldSpec& field, std::uint32_t k,
                                       std::uint32_t epsilon,
                                       const DesignSearchConfig& cfg) {
  const SparkSearchOutcome unconstrained = search_max_spark(field, k, epsilon, cfg);
  const FqMatrix first = select_mslc(unconstrained.matrices);
  return osprlc_from_first(field, k, epsilon, first, cfg);
}

std::uint32_t CatalogEntry::lowest_spark() const {
  std::uint32_t v = ~0u;
  for (const auto& m : matrices) v = std::min(v, m.spark);
  return v;
}

std::uint32_t CatalogEntry::highest_spark() const {
  std::uint32_t v = 0;
  for (const auto& m : matrices) v = std::max(v, m.spark);
  return v;
}

Rational CatalogEntry::poe_delta(std::uint32_t delta) const {
  Rational sum;
  for (const auto& m : matrices) sum = sum + m.poe[delta];
  return sum / Rational(static_cast<std::int64_t>(matrices.size()));
}

const CatalogEntry* Catalog::find(Scheme scheme, std::uint32_t epsilon) const {
  for (const auto& e : entries)
    if (e.scheme == scheme && e.epsilon == epsilon) return &e;
  return nullptr;
}

namespace {

std::vector<Rational> poe_all(const FqMatrix& p) {
  std::vector<Rational> out;
  out.reserve(p.field().q());
  for (std::uint32_t d = 0; d < p.field().q(); ++d)
    out.push_back(poe_matrix(p, d));
  return out;
}

std::uint32_t evaluate_spark(const FieldSpec& field, std::uint32_t k,
                             const FqMatrix& parity) {
  SparkEvaluator eval(field, k, parity.rows());
  return eval.eval_spark(parity.entries());
}

}  // namespace

Catalog build_catalog(const FieldSpec& field, std::uint32_t k,
                      std::span<const Scheme> schemes, std::uint32_t eps_max,
                      const DesignSearchConfig& cfg) {
  if (eps_max == 0) throw std::invalid_argument("catalog needs eps_max >= 1");
  bool want_mslc = false, want_osprlc = false;
  for (Scheme s : schemes) {
    if (s == Scheme::MSLC) want_mslc = true;
    else if (s == Scheme::OSPRLC) want_osprlc = true;
    else throw std::invalid_argument("RLC draws random matrices and has no catalog");
  }
  if (!want_mslc && !want_osprlc)
    throw std::invalid_argument("catalog needs at least one scheme");

  Catalog cat{field, k, {}};
  for (std::uint32_t eps = 1; eps <= eps_max; ++eps) {
    const SparkSearchOutcome unconstrained = search_max_spark(field, k, eps, cfg);
    const FqMatrix chosen = select_mslc(unconstrained.matrices);
    if (want_mslc) {
      CatalogEntry entry{Scheme::MSLC, eps, cfg.seed, cfg.budget, {}};
      entry.matrices.push_back(
          {chosen, unconstrained.best_spark, poe_all(chosen)});
      cat.entries.push_back(std::move(entry));
    }
    if (want_osprlc) {
      CatalogEntry entry{Scheme::OSPRLC, eps, cfg.seed, cfg.budget, {}};
      auto set = osprlc_from_first(field, k, eps, chosen, cfg);
      entry.matrices.push_back({set[0], unconstrained.best_spark, poe_all(set[0])});
      entry.matrices.push_back(
          {set[1], evaluate_spark(field, k, set[1]), poe_all(set[1])});
      cat.entries.push_back(std::move(entry));
    }
  }
  std::sort(cat.entries.begin(), cat.entries.end(),
            [](const CatalogEntry& a, const CatalogEntry& b) {
              if (a.scheme != b.scheme) return a.scheme < b.scheme;
              return a.epsilon < b.epsilon;
            });
  return cat;
}

namespace {

std::string row_string(const FqMatrix& m, std::uint32_t r) {
  std::string out;
  for (std::uint32_t c = 0; c < m.cols(); ++c) {
    if (c) out += ' ';
    out += std::to_string(m.at(r, c));
  }
  return out;
}

}  // namespace

std::string catalog_to_json(const Catalog& catalog) {
  nlohmann::json j;
  j["q"] = catalog.field.q();
  j["K"] = catalog.k;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : catalog.entries) {
    nlohmann::json je;
    je["scheme"] = scheme_name(e.scheme);
    je["epsilon"] = e.epsilon;
    je["seed"] = e.seed;
    je["budget"] = e.budget;
    je["matrices"] = nlohmann::json::array();
    for (const auto& m : e.matrices) {
      nlohmann::json jm;
      jm["rows"] = nlohmann::json::array();
      for (std::uint32_t r = 0; r < m.parity.rows(); ++r)
        jm["rows"].push_back(row_string(m.parity, r));
      jm["spark"] = m.spark;
      nlohmann::json jp;
      for (std::uint32_t d = 0; d < catalog.field.q(); ++d)
        jp[std::to_string(d)] = m.poe[d].str();
      jm["poe"] = std::move(jp);
      je["matrices"].push_back(std::move(jm));
    }
    j["entries"].push_back(std::move(je));
  }
  return j.dump(2) + "\n";
}

namespace {

[[noreturn]] void reject(const std::string& where, const std::string& why) {
  throw CatalogError("catalog rejected at " + where + ": " + why);
}

FqMatrix parse_rows(const FieldSpec& field, const std::vector<std::string>& rows,
                    std::uint32_t k, const std::string& where) {
  std::vector<std::uint32_t> entries;
  for (const std::string& row : rows) {
    std::istringstream in(row);
    std::uint64_t v = 0;
    std::uint32_t n = 0;
    while (in >> v) {
      if (v >= field.q()) reject(where, "entry outside field");
      entries.push_back(static_cast<std::uint32_t>(v));
      ++n;
    }
    if (n != k) reject(where, "row does not hold K entries");
  }
  return FqMatrix(field, static_cast<std::uint32_t>(rows.size()), k,
                  std::move(entries));
}

}  // namespace

Catalog catalog_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CatalogError(std::string("catalog parse failure: ") + e.what());
  }
  try {
    const auto q = j.at("q").get<std::uint32_t>();
    if (!is_prime(q)) throw CatalogError("catalog field size is not prime");
    const FieldSpec field(q);
    Catalog cat{field, j.at("K").get<std::uint32_t>(), {}};
    for (const auto& je : j.at("entries")) {
      CatalogEntry entry;
      const std::string sname = je.at("scheme").get<std::string>();
      const auto scheme = parse_scheme(sname);
      if (!scheme || *scheme == Scheme::RLC)
        throw CatalogError("catalog holds unknown scheme '" + sname + "'");
      entry.scheme = *scheme;
      entry.epsilon = je.at("epsilon").get<std::uint32_t>();
      entry.seed = je.at("seed").get<std::uint64_t>();
      entry.budget = je.at("budget").get<std::uint64_t>();
      const std::string where =
          "scheme=" + sname + " epsilon=" + std::to_string(entry.epsilon);
      if (entry.epsilon == 0) reject(where, "redundancy must be positive");
      std::size_t mi = 0;
      for (const auto& jm : je.at("matrices")) {
        const std::string mwhere = where + " matrix " + std::to_string(mi);
        const auto rows = jm.at("rows").get<std::vector<std::string>>();
        if (rows.size() != entry.epsilon)
          reject(mwhere, "row count does not match redundancy");
        CatalogMatrix cm{parse_rows(field, rows, cat.k, mwhere),
                         jm.at("spark").get<std::uint32_t>(),
                         {}};
        // Re-verify the stored spark with the capped subset search: it must
        // find a dependent set of exactly the stored size and nothing
        // smaller.
        const SystematicCode code(field, cat.k, cat.k + entry.epsilon, cm.parity);
        const SparkResult check =
            spark_subset_search(code.parity_check().transposed(), cm.spark);
        if (!check.finite() || check.value != cm.spark)
          reject(mwhere, "stored spark " + std::to_string(cm.spark) +
                             " does not verify");
        for (std::uint32_t d = 0; d < q; ++d) {
          const Rational stored =
              Rational::parse(jm.at("poe").at(std::to_string(d)).get<std::string>());
          if (!(stored == poe_matrix(cm.parity, d)))
            reject(mwhere, "stored proportion for element " + std::to_string(d) +
                               " does not verify");
          cm.poe.push_back(stored);
        }
        entry.matrices.push_back(std::move(cm));
        ++mi;
      }
      if (entry.scheme == Scheme::MSLC && entry.matrices.size() != 1)
        reject(where, "MSLC entries hold exactly one matrix");
      if (entry.scheme == Scheme::OSPRLC) {
        if (entry.matrices.size() < 2)
          reject(where, "OSPRLC entries hold at least two matrices");
        std::vector<FqMatrix> set;
        for (const auto& m : entry.matrices) set.push_back(m.parity);
        for (std::uint32_t d = 0; d < q; ++d) {
          if (!(poe_set(set, d) == Rational(1, q)))
            reject(where, "set proportion of element " + std::to_string(d) +
                              " is not exactly 1/q");
        }
      }
      cat.entries.push_back(std::move(entry));
    }
    // Redundancy coverage must be contiguous from 1 for each scheme present.
    for (Scheme s : {Scheme::MSLC, Scheme::OSPRLC}) {
      std::vector<std::uint32_t> eps;
      for (const auto& e : cat.entries)
        if (e.scheme == s) eps.push_back(e.epsilon);
      std::sort(eps.begin(), eps.end());
      for (std::size_t i = 0; i < eps.size(); ++i) {
        if (eps[i] != i + 1)
          throw CatalogError(std::string("catalog rejected: scheme ") +
                             scheme_name(s) +
                             " does not cover a contiguous redundancy range "
                             "starting at 1");
      }
    }
    return cat;
  } catch (const CatalogError&) {
    throw;
  } catch (const std::exception& e) {
    throw CatalogError(std::string("catalog structure invalid: ") + e.what());
  }
}

void save_catalog(const Catalog& catalog, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << catalog_to_json(catalog);
  if (!out) throw std::runtime_error("write failure on '" + path + "'");
}

Catalog load_catalog(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open catalog '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return catalog_from_json(buf.str());
}

FqMatrix sample_design(const Catalog& catalog, Scheme scheme,
                       std::uint32_t epsilon, Rng& rng) {
  const CatalogEntry* entry = catalog.find(scheme, epsilon);
  if (!entry) {
    throw CatalogError(std::string("no catalog entry for scheme ") +
                       scheme_name(scheme) + " at redundancy " +
                       std::to_string(epsilon));
  }
  if (scheme == Scheme::MSLC) return entry->matrices.front().parity;
  const auto pick = rng.below(entry->matrices.size());
  return entry->matrices[pick].parity;
}

}  // namespace sparkppr
