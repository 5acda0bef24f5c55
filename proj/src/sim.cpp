#include "sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace sparkppr {

void ExperimentConfig::validate() const {
  if (n_values.empty()) throw std::invalid_argument("no packet counts configured");
  for (std::uint32_t n : n_values)
    if (n <= k)
      throw std::invalid_argument("every N must exceed K = " + std::to_string(k));
  if (schemes.empty()) throw std::invalid_argument("no schemes configured");
  for (std::size_t i = 0; i < schemes.size(); ++i)
    for (std::size_t j = i + 1; j < schemes.size(); ++j)
      if (schemes[i] == schemes[j])
        throw std::invalid_argument("duplicate scheme in configuration");
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (k == 0) throw std::invalid_argument("K must be >= 1");
  channel.validate(field.q());
}

TrialOutcome run_trial(const ExperimentConfig& config, const Catalog* catalog,
                       Scheme scheme, std::uint32_t n, std::uint64_t trial_seed,
                       Delivery* capture) {
  const FieldSpec& field = config.field;
  const std::uint32_t eps = n - config.k;

  // Independent sub-streams so the channel realization is shared across
  // schemes for the same (n, trial) pair.
  Rng design_rng(derive_seed(trial_seed, {1}));
  Rng payload_rng(derive_seed(trial_seed, {2}));
  Rng channel_rng(derive_seed(trial_seed, {3}));
  Rng delivery_rng(derive_seed(trial_seed, {4}));

  FqMatrix parity = [&] {
    if (scheme == Scheme::RLC)
      return FqMatrix::random(field, eps, config.k, design_rng);
    if (!catalog)
      throw CatalogError(std::string("scheme ") + scheme_name(scheme) +
                         " requires a catalog");
    return sample_design(*catalog, scheme, eps, design_rng);
  }();
  const SystematicCode code(field, config.k, n, std::move(parity));

  const FqMatrix source =
      FqMatrix::random(field, config.k, config.channel.payload_len, payload_rng);
  const FqMatrix coded = mat_mul(code.generator(), source);

  ChannelParams channel = config.channel;
  const auto buffers = transmit(coded, channel, channel_rng);
  const Delivery delivery =
      deliver(buffers, field, channel.packing, delivery_rng);
  if (capture) *capture = delivery;

  TrialOutcome out;
  for (std::uint32_t i : delivery.crc_pass)
    out.delivery_false_accepts += delivery.truly_clean[i] ? 0 : 1;

  const ReceptionState state =
      make_reception_state(code, delivery, channel.packing);

  DecodeOptions plain_opt;
  plain_opt.use_sd = false;
  const DecodeReport plain = decode(state, plain_opt);
  out.plain_success = plain.success;
  if (plain.success && plain.source && !(*plain.source == source))
    out.truth_mismatch = true;

  if (config.decoder == DecoderMode::WithSD) {
    out.sd_ran = true;
    DecodeOptions sd_opt;
    sd_opt.use_sd = true;
    sd_opt.repair.w_max = config.w_max;
    sd_opt.repair.column_work_cap = config.column_work_cap;
    sd_opt.repair.ground_truth = &coded;
    const DecodeReport sd = decode(state, sd_opt);
    out.sd_success = sd.success;
    out.sd_rescued = sd.sd_rescued;
    out.repaired = sd.repaired;
    out.repair_false_accepts = sd.false_accepts;
    out.condition_met = sd.sd_invoked && sd.all_columns_certified;
    if (sd.success && sd.source && !(*sd.source == source))
      out.truth_mismatch = true;
    if (sd.sd_invoked) {
      out.column_status.reserve(sd.columns.size());
      for (const ColumnReport& c : sd.columns) {
        const std::uint8_t v =
            c.status != ColumnReport::Status::Solved ? 0
            : (c.certified_unique ? 2 : 1);
        out.column_status.push_back(v);
      }
    }
  } else {
    out.sd_success = out.plain_success;
  }
  return out;
}

namespace {

struct TrialBits {
  std::uint8_t flags = 0;  // bit0 plain, bit1 sd, bit2 rescued, bit3 cond_met
  std::uint8_t repaired = 0;
  std::uint8_t repair_fa = 0;
  std::uint8_t delivery_fa = 0;
};

struct PointAggregate {
  std::uint64_t plain_successes = 0;
  std::uint64_t sd_successes = 0;
  std::uint64_t rescued_cert = 0;
  std::uint64_t rescued_uncert = 0;
  std::uint64_t false_accepts = 0;
  std::uint64_t truth_mismatches = 0;
};

void run_parallel_trials(std::uint64_t trials, std::uint32_t workers,
                         const std::function<void(std::uint64_t)>& body) {
  const std::uint32_t nw = std::max(1u, workers);
  if (nw == 1) {
    for (std::uint64_t t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (std::uint32_t w = 0; w < nw; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t t = next.fetch_add(1);
        if (t >= trials) break;
        body(t);
      }
    });
  }
  for (auto& t : pool) t.join();
}

std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

Wilson wilson95(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (ph + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
  // Clamp to [0,1] and force the estimate inside the interval; the algebra
  // guarantees containment but the last floating-point ulp does not.
  return {std::min(ph, std::max(0.0, center - half)),
          std::max(ph, std::min(1.0, center + half))};
}

std::string config_fingerprint(const ExperimentConfig& c) {
  std::string canon = "q=" + std::to_string(c.field.q()) +
                      ";K=" + std::to_string(c.k) + ";N=";
  for (std::size_t i = 0; i < c.n_values.size(); ++i) {
    if (i) canon += ',';
    canon += std::to_string(c.n_values[i]);
  }
  canon += ";schemes=";
  for (std::size_t i = 0; i < c.schemes.size(); ++i) {
    if (i) canon += ',';
    canon += scheme_name(c.schemes[i]);
  }
  canon += std::string(";decoder=") +
           (c.decoder == DecoderMode::Plain ? "plain" : "with_SD");
  canon += ";M=" + std::to_string(c.channel.drones) + ";eps=";
  for (std::size_t i = 0; i < c.channel.erasure.size(); ++i) {
    if (i) canon += ',';
    canon += format_g6(c.channel.erasure[i]);
  }
  canon += ";ps=" + format_g6(c.channel.symbol_error_prob);
  canon += ";L=" + std::to_string(c.channel.payload_len);
  canon += std::string(";packing=") +
           (c.channel.packing == SymbolPacking::ByteRaw ? "byte" : "bits");
  canon += ";trials=" + std::to_string(c.trials);
  canon += ";seed=" + std::to_string(c.root_seed);
  canon += ";w_max=" + std::to_string(c.w_max);
  canon += ";work_cap=" + std::to_string(c.column_work_cap);
  canon += ";catalog=" + c.catalog_path;

  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (unsigned char ch : canon) {
    h ^= ch;
    (void)splitmix64(h);
  }
  std::uint64_t fp = splitmix64(h);
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fp));
  return buf;
}

SimResult run_experiment(const ExperimentConfig& config, const Catalog* catalog) {
  config.validate();
  bool needs_catalog = false;
  for (Scheme s : config.schemes) needs_catalog |= s != Scheme::RLC;
  if (needs_catalog && !catalog)
    throw CatalogError("configuration uses catalog schemes but no catalog was given");
  if (catalog) {
    for (Scheme s : config.schemes) {
      if (s == Scheme::RLC) continue;
      for (std::uint32_t n : config.n_values) {
        if (!catalog->find(s, n - config.k))
          throw CatalogError(std::string("no catalog entry for scheme ") +
                             scheme_name(s) + " at redundancy " +
                             std::to_string(n - config.k));
      }
    }
  }

  SimResult result;
  result.config = config;
  result.fingerprint = config_fingerprint(config);
  std::uint64_t digest = 0x51b7a0d45dd3ull ^ config.root_seed;

  bool dumped = false;
  for (Scheme scheme : config.schemes) {
    SchemeResult sres;
    sres.scheme = scheme;
    for (std::uint32_t n : config.n_values) {
      std::vector<TrialBits> bits(config.trials);
      const bool capture_first = !dumped && !config.dump_path.empty();
      Delivery first_delivery;
      run_parallel_trials(config.trials, config.workers, [&](std::uint64_t t) {
        const std::uint64_t trial_seed =
            derive_seed(config.root_seed, {n, t});
        Delivery* cap = (capture_first && t == 0) ? &first_delivery : nullptr;
        const TrialOutcome out =
            run_trial(config, catalog, scheme, n, trial_seed, cap);
        TrialBits b;
        b.flags = static_cast<std::uint8_t>(
            (out.plain_success ? 1 : 0) | (out.sd_success ? 2 : 0) |
            (out.sd_rescued ? 4 : 0) | (out.condition_met ? 8 : 0) |
            (out.truth_mismatch ? 16 : 0));
        b.repaired = static_cast<std::uint8_t>(std::min<std::uint32_t>(out.repaired, 255));
        b.repair_fa = static_cast<std::uint8_t>(
            std::min<std::uint32_t>(out.repair_false_accepts, 255));
        b.delivery_fa = static_cast<std::uint8_t>(
            std::min<std::uint32_t>(out.delivery_false_accepts, 255));
        bits[t] = b;
      });
      if (capture_first) {
        std::ofstream dump(config.dump_path, std::ios::binary);
        if (!dump)
          throw std::runtime_error("cannot open dump path '" +
                                   config.dump_path + "'");
        std::vector<FramedPacket> packets;
        for (std::uint32_t i = 0; i < first_delivery.stored.rows(); ++i) {
          FramedPacket pkt;
          pkt.index = i;
          pkt.payload.assign(first_delivery.stored.row(i).begin(),
                             first_delivery.stored.row(i).end());
          pkt.crc = first_delivery.crcs[i];
          pkt.clean = first_delivery.truly_clean[i] != 0;
          packets.push_back(std::move(pkt));
        }
        write_packet_dump(dump, packets, config.field.q(),
                          config.channel.packing);
        dumped = true;
      }

      PointAggregate agg;
      for (std::uint64_t t = 0; t < config.trials; ++t) {
        const TrialBits& b = bits[t];
        agg.plain_successes += b.flags & 1 ? 1 : 0;
        agg.sd_successes += b.flags & 2 ? 1 : 0;
        if (b.flags & 4) {
          if (b.flags & 8)
            ++agg.rescued_cert;
          else
            ++agg.rescued_uncert;
        }
        agg.false_accepts += b.repair_fa + b.delivery_fa;
        agg.truth_mismatches += b.flags & 16 ? 1 : 0;
        digest ^= b.flags + (static_cast<std::uint64_t>(b.repaired) << 8);
        digest = splitmix64(digest);
      }

      CurvePoint plain;
      plain.n = n;
      plain.trials = config.trials;
      plain.successes = agg.plain_successes;
      plain.p_decode =
          static_cast<double>(agg.plain_successes) / static_cast<double>(config.trials);
      const Wilson wp = wilson95(agg.plain_successes, config.trials);
      plain.ci_low = wp.low;
      plain.ci_high = wp.high;
      sres.plain.push_back(plain);

      if (config.decoder == DecoderMode::WithSD) {
        CurvePoint sd;
        sd.n = n;
        sd.trials = config.trials;
        sd.successes = agg.sd_successes;
        sd.p_decode =
            static_cast<double>(agg.sd_successes) / static_cast<double>(config.trials);
        const Wilson ws = wilson95(agg.sd_successes, config.trials);
        sd.ci_low = ws.low;
        sd.ci_high = ws.high;
        sres.with_sd.push_back(sd);

        DecompositionPoint dp;
        dp.n = n;
        dp.rescued_cert = agg.rescued_cert;
        dp.rescued_uncert = agg.rescued_uncert;
        dp.p_cond_met =
            static_cast<double>(agg.rescued_cert) / static_cast<double>(config.trials);
        dp.p_cond_not_met =
            static_cast<double>(agg.rescued_uncert) / static_cast<double>(config.trials);
        sres.decomposition.push_back(dp);
      }
    }
    result.schemes.push_back(std::move(sres));
  }
  result.outcome_digest = digest;
  return result;
}

std::vector<CurvePoint> estimate_curve(const ExperimentConfig& config,
                                       const Catalog* catalog, Scheme scheme) {
  ExperimentConfig one = config;
  one.schemes = {scheme};
  one.dump_path.clear();
  const SimResult r = run_experiment(one, catalog);
  return config.decoder == DecoderMode::WithSD ? r.schemes.front().with_sd
                                               : r.schemes.front().plain;
}

std::vector<DecompositionPoint> decompose_sd_contribution(
    const ExperimentConfig& config, const Catalog* catalog, Scheme scheme) {
  if (config.decoder != DecoderMode::WithSD)
    throw std::invalid_argument("decomposition requires the repair-assisted decoder");
  ExperimentConfig one = config;
  one.schemes = {scheme};
  one.dump_path.clear();
  const SimResult r = run_experiment(one, catalog);
  return r.schemes.front().decomposition;
}

namespace {

std::string eps_column(const ExperimentConfig& c) {
  std::string out;
  for (std::size_t i = 0; i < c.channel.erasure.size(); ++i) {
    if (i) out += ';';
    out += format_g6(c.channel.erasure[i]);
  }
  return out;
}

void append_row(std::string& csv, const ExperimentConfig& c, Scheme scheme,
                const char* decoder, const CurvePoint& p, double cond_met,
                double cond_not_met) {
  csv += scheme_name(scheme);
  csv += ',';
  csv += decoder;
  csv += ',' + std::to_string(c.field.q());
  csv += ',' + std::to_string(c.k);
  csv += ',' + std::to_string(p.n);
  csv += ',' + std::to_string(c.channel.drones);
  csv += ',' + eps_column(c);
  csv += ',' + format_g6(c.channel.symbol_error_prob);
  csv += ',' + std::to_string(c.channel.payload_len);
  csv += ',' + std::to_string(p.trials);
  csv += ',' + format_g6(p.p_decode);
  csv += ',' + format_g6(p.ci_low);
  csv += ',' + format_g6(p.ci_high);
  csv += ',' + format_g6(cond_met);
  csv += ',' + format_g6(cond_not_met);
  csv += ',' + std::to_string(c.root_seed);
  csv += '\n';
}

}  // namespace

std::string results_csv(const SimResult& result) {
  std::string csv =
      "scheme,decoder,q,K,N,M,eps,ps,L,trials,p_decode,ci_low,ci_high,"
      "p_cond_met,p_cond_not_met,seed\n";
  for (const SchemeResult& s : result.schemes) {
    for (const CurvePoint& p : s.plain)
      append_row(csv, result.config, s.scheme, "plain", p, 0.0, 0.0);
    for (std::size_t i = 0; i < s.with_sd.size(); ++i) {
      append_row(csv, result.config, s.scheme, "with_SD", s.with_sd[i],
                 s.decomposition[i].p_cond_met,
                 s.decomposition[i].p_cond_not_met);
    }
  }
  return csv;
}

std::string summarize(const SimResult& result) {
  std::string out = "config " + result.fingerprint + " seed " +
                    std::to_string(result.config.root_seed) + " trials " +
                    std::to_string(result.config.trials) + "\n";
  for (const SchemeResult& s : result.schemes) {
    for (std::size_t i = 0; i < s.plain.size(); ++i) {
      out += std::string(scheme_name(s.scheme)) +
             " N=" + std::to_string(s.plain[i].n) +
             " plain=" + format_g6(s.plain[i].p_decode);
      if (i < s.with_sd.size()) {
        out += " with_SD=" + format_g6(s.with_sd[i].p_decode);
        out += " rescued(cert)=" + format_g6(s.decomposition[i].p_cond_met);
        out += " rescued(uncert)=" + format_g6(s.decomposition[i].p_cond_not_met);
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace sparkppr
