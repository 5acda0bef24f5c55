// sparkppr command line: spark-optimized code design, spark queries and
// relay-channel decoding experiments, all reproducible from explicit seeds.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 design search
// infeasibility, 4 missing artifact (input file or catalog), 1 otherwise.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparkppr.h"

namespace {

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("SPARKPPR_SEED");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const unsigned long long s = std::strtoull(v, &end, 10);
  if (end == v || *end) return std::nullopt;
  return static_cast<std::uint64_t>(s);
}

void print_error(sppr_status rc) {
  std::fprintf(stderr, "error: %s\n", sppr_last_error());
  (void)rc;
}

int run_design(std::uint32_t q, std::uint32_t k, const std::string& eps_range,
               const std::string& schemes, std::uint64_t budget,
               std::optional<std::uint64_t> seed_flag, const std::string& out,
               std::uint32_t workers) {
  const auto seed = seed_flag ? seed_flag : env_seed();
  if (!seed) {
    std::fprintf(stderr, "error: no seed (use --seed or SPARKPPR_SEED)\n");
    return 2;
  }
  // Accepted range forms: "1..E" or a bare "E"; catalogs always cover the
  // contiguous redundancy range starting at 1.
  std::uint32_t eps_max = 0;
  {
    const auto dots = eps_range.find("..");
    std::string lo = "1", hi = eps_range;
    if (dots != std::string::npos) {
      lo = eps_range.substr(0, dots);
      hi = eps_range.substr(dots + 2);
    }
    char* end = nullptr;
    const unsigned long lov = std::strtoul(lo.c_str(), &end, 10);
    if (end == lo.c_str() || *end || lov != 1) {
      std::fprintf(stderr,
                   "error: --eps must be '1..E' or 'E' (catalogs start at "
                   "redundancy 1), got '%s'\n",
                   eps_range.c_str());
      return 2;
    }
    end = nullptr;
    const unsigned long hiv = std::strtoul(hi.c_str(), &end, 10);
    if (end == hi.c_str() || *end || hiv == 0) {
      std::fprintf(stderr, "error: empty or malformed --eps range '%s'\n",
                   eps_range.c_str());
      return 2;
    }
    eps_max = static_cast<std::uint32_t>(hiv);
  }

  sppr_catalog* catalog = nullptr;
  sppr_status rc = sppr_design_search(q, k, eps_max, schemes.c_str(), budget,
                                      *seed, workers, &catalog);
  if (rc != SPPR_OK) {
    print_error(rc);
    return rc == SPPR_ERR_INFEASIBLE ? 3 : 2;
  }
  rc = sppr_catalog_save(catalog, out.c_str());
  if (rc != SPPR_OK) {
    print_error(rc);
    sppr_catalog_free(catalog);
    return 1;
  }

  // Summary table, one row per N: element balance and spark range reached.
  std::printf("catalog: %s (q=%" PRIu32 " K=%" PRIu32 " seed=%" PRIu64
              " budget=%" PRIu64 ")\n",
              out.c_str(), q, k, *seed, budget);
  std::printf("%4s  %-8s %-9s %-6s %-13s %-13s\n", "N", "scheme", "prop(1)",
              "spark", "lowest spark", "highest spark");
  const size_t rows = sppr_catalog_size(catalog);
  for (size_t i = 0; i < rows; ++i) {
    sppr_catalog_row row;
    if (sppr_catalog_row_info(catalog, i, &row) != SPPR_OK) continue;
    const bool single = row.matrix_count == 1;
    std::printf("%4" PRIu32 "  %-8s %-9.4g ", row.n, row.scheme, row.poe_one);
    if (single)
      std::printf("%-6" PRIu32 " %-13s %-13s\n", row.highest_spark, "-", "-");
    else
      std::printf("%-6s %-13" PRIu32 " %-13" PRIu32 "\n", "-", row.lowest_spark,
                  row.highest_spark);
  }
  sppr_catalog_free(catalog);
  return 0;
}

int run_spark(const std::string& path) {
  sppr_matrix* m = nullptr;
  sppr_status rc = sppr_matrix_read_file(path.c_str(), &m);
  if (rc != SPPR_OK) {
    print_error(rc);
    return rc == SPPR_ERR_IO ? 4 : 2;
  }
  uint32_t spark = 0;
  int unbounded = 0;
  std::vector<uint32_t> witness(sppr_matrix_cols(m));
  size_t wlen = 0;
  rc = sppr_matrix_spark(m, &spark, &unbounded, witness.data(), witness.size(),
                         &wlen);
  sppr_matrix_free(m);
  if (rc != SPPR_OK) {
    print_error(rc);
    return 1;
  }
  if (unbounded) {
    std::printf("spark: unbounded\n");
  } else {
    std::printf("spark: %" PRIu32 "\n", spark);
    std::printf("witness columns:");
    for (size_t i = 0; i < wlen; ++i) std::printf(" %" PRIu32, witness[i]);
    std::printf("\n");
  }
  return 0;
}

int run_simulate(const std::string& config, std::optional<std::uint64_t> seed_flag,
                 const std::string& out_flag, std::uint32_t workers) {
  const auto fallback = env_seed();
  sppr_sim_result* result = nullptr;
  const sppr_status rc = sppr_sim_run_file(
      config.c_str(), seed_flag ? 1 : 0, seed_flag.value_or(0),
      fallback ? 1 : 0, fallback.value_or(0), workers, &result);
  if (rc != SPPR_OK) {
    print_error(rc);
    if (rc == SPPR_ERR_MISSING || rc == SPPR_ERR_VERIFY) return 4;
    if (rc == SPPR_ERR_INVALID_ARG || rc == SPPR_ERR_PARSE || rc == SPPR_ERR_IO)
      return 2;
    return 1;
  }
  std::string out = out_flag;
  if (out.empty()) out = sppr_sim_out_path(result);
  if (out.empty()) {
    std::fprintf(stderr,
                 "error: no output path (set 'out' in the config or pass "
                 "--out)\n");
    sppr_sim_result_free(result);
    return 2;
  }
  const sppr_status wrc = sppr_sim_write_csv(result, out.c_str());
  if (wrc != SPPR_OK) {
    print_error(wrc);
    sppr_sim_result_free(result);
    return 1;
  }
  std::printf("%s", sppr_sim_summary(result));
  std::printf("wrote %s\n", out.c_str());
  sppr_sim_result_free(result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-field coding designs and relay decoding experiments"};
  app.require_subcommand(1);

  // design
  auto* design = app.add_subcommand(
      "design", "search spark-maximizing designs and write a catalog");
  std::uint32_t q = 2, k = 8, workers = 1;
  std::string eps_range = "1..10", schemes = "MSLC,OSPRLC";
  std::uint64_t budget = 100000;
  std::optional<std::uint64_t> seed;
  std::string out_path = "catalog.json";
  design->add_option("--q", q, "field size (prime)");
  design->add_option("--k", k, "source packet count");
  design->add_option("--eps", eps_range, "redundancy range, e.g. 1..10");
  design->add_option("--scheme", schemes, "MSLC, OSPRLC or a comma list");
  design->add_option("--budget", budget, "spark evaluations per search phase");
  design->add_option("--seed", seed, "search seed (or SPARKPPR_SEED)");
  design->add_option("--out", out_path, "catalog output path");
  design->add_option("--workers", workers, "parallel workers");

  // spark
  auto* spark = app.add_subcommand("spark", "spark of a matrix in text format");
  std::string matrix_path;
  spark->add_option("matrix", matrix_path, "matrix file")->required();

  // simulate
  auto* simulate =
      app.add_subcommand("simulate", "run a decoding-probability experiment");
  std::string config_path, sim_out;
  std::optional<std::uint64_t> sim_seed;
  std::uint32_t sim_workers = 0;
  simulate->add_option("--config", config_path, "experiment config file")
      ->required();
  simulate->add_option("--seed", sim_seed, "seed override");
  simulate->add_option("--out", sim_out, "CSV output path override");
  simulate->add_option("--workers", sim_workers, "parallel workers override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (design->parsed())
    return run_design(q, k, eps_range, schemes, budget, seed, out_path, workers);
  if (spark->parsed()) return run_spark(matrix_path);
  if (simulate->parsed())
    return run_simulate(config_path, sim_seed, sim_out, sim_workers);
  return 2;
}
