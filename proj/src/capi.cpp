#include "sparkppr.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "design.hpp"
#include "sim.hpp"

extern "C" {

struct sppr_matrix {
  sparkppr::FqMatrix m;
};

struct sppr_catalog {
  sparkppr::Catalog c;
};

struct sppr_sim_result {
  sparkppr::SimResult r;
  std::string csv;
  std::string summary;
};

}  // extern "C"

namespace {

thread_local std::string t_last_error;

void set_error(const std::string& msg) { t_last_error = msg; }

// Runs `body` and maps thrown exceptions onto status codes.
template <typename Body>
sppr_status guarded(Body&& body) {
  try {
    t_last_error.clear();
    return body();
  } catch (const sparkppr::TextParseError& e) {
    set_error(e.what());
    return SPPR_ERR_PARSE;
  } catch (const sparkppr::RunConfigError& e) {
    set_error(e.what());
    // Unreadable config files surface as IO so callers can distinguish a
    // missing artifact from a bad one.
    return std::strstr(e.what(), "cannot open") ? SPPR_ERR_IO : SPPR_ERR_PARSE;
  } catch (const sparkppr::InfeasibleError& e) {
    set_error(e.what());
    return SPPR_ERR_INFEASIBLE;
  } catch (const sparkppr::CatalogError& e) {
    set_error(e.what());
    return std::strstr(e.what(), "no catalog entry") ||
                   std::strstr(e.what(), "requires a catalog") ||
                   std::strstr(e.what(), "no catalog was given")
               ? SPPR_ERR_MISSING
               : SPPR_ERR_VERIFY;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return SPPR_ERR_INVALID_ARG;
  } catch (const std::runtime_error& e) {
    set_error(e.what());
    return std::strstr(e.what(), "cannot open") ? SPPR_ERR_IO
                                                : SPPR_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return SPPR_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* sppr_version(void) { return "0.1.0"; }

const char* sppr_last_error(void) { return t_last_error.c_str(); }

sppr_status sppr_matrix_parse(const char* text, sppr_matrix** out) {
  if (!text || !out) {
    set_error("null argument");
    return SPPR_ERR_INVALID_ARG;
  }
  return guarded([&] {
    *out = new sppr_matrix{sparkppr::FqMatrix::from_text(text)};
    return SPPR_OK;
  });
}

sppr_status sppr_matrix_read_file(const char* path, sppr_matrix** out) {
  if (!path || !out) {
    set_error("null argument");
    return SPPR_ERR_INVALID_ARG;
  }
  return guarded([&]() -> sppr_status {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      set_error(std::string("cannot open matrix file '") + path + "'");
      return SPPR_ERR_IO;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    *out = new sppr_matrix{sparkppr::FqMatrix::from_text(buf.str())};
    return SPPR_OK;
  });
}

void sppr_matrix_free(sppr_matrix* m) { delete m; }

uint32_t sppr_matrix_rows(const sppr_matrix* m) { return m ? m->m.rows() : 0; }
uint32_t sppr_matrix_cols(const sppr_matrix* m) { return m ? m->m.cols() : 0; }
uint32_t sppr_matrix_field(const sppr_matrix* m) {
  return m ? m->m.field().q() : 0;
}
uint32_t sppr_matrix_rank(const sppr_matrix* m) {
  return m ? sparkppr::rank(m->m) : 0;
}

sppr_status sppr_matrix_spark(const sppr_matrix* m, uint32_t* spark,
                              int* unbounded, uint32_t* witness,
                              size_t witness_cap, size_t* witness_len) {
  if (!m || !spark || !unbounded) {
    set_error("null argument");
    return SPPR_ERR_INVALID_ARG;
  }
  return guarded([&] {
    const sparkppr::SparkResult r = sparkppr::spark_subset_search(m->m);
    if (r.finite()) {
      *spark = r.value;
      *unbounded = 0;
      if (witness_len) *witness_len = r.witness.size();
      if (witness) {
        for (size_t i = 0; i < r.witness.size() && i < witness_cap; ++i)
          witness[i] = r.witness[i] + 1;
      }
    } else {
      *spark = 0;
      *unbounded = 1;
      if (witness_len) *witness_len = 0;
    }
    return SPPR_OK;
  });
}

sppr_status sppr_design_search(uint32_t q, uint32_t k, uint32_t eps_max,
                               const char* schemes, uint64_t budget,
                               uint64_t seed, uint32_t workers,
                               sppr_catalog** out) {
  if (!schemes || !out) {
    set_error("null argument");
    return SPPR_ERR_INVALID_ARG;
  }
  return guarded([&]() -> sppr_status {
    std::vector<sparkppr::Scheme> parsed;
    std::string token;
    std::istringstream in(schemes);
    while (std::getline(in, token, ',')) {
      const auto s = sparkppr::parse_scheme(token);
      if (!s) {
        set_error("unknown scheme '" + token + "'");
        return SPPR_ERR_INVALID_ARG;
      }
      parsed.push_back(*s);
    }
    sparkppr::DesignSearchConfig cfg;
    cfg.budget = budget;
    cfg.seed = seed;
    cfg.workers = workers ? workers : 1;
    const sparkppr::FieldSpec field(q);
    *out = new sppr_catalog{
        sparkppr::build_catalog(field, k, parsed, eps_max, cfg)};
    return SPPR_OK;
  });
}

sppr_status sppr_catalog_save(const sppr_catalog* c, const char* path) {
  if (!c || !path) {
    set_error("null argument");
    return SPPR_ERR_INVALID_ARG;
  }
  return guarded([&] {
    sparkppr::save_catalog(c->c, path);
    return SPPR_OK;
  });
}

sppr_status sppr_catalog_load(const char* path, sppr_catalog** out) {
  if (!path || !out) {
    set_error("null argument");
    return SPPR_ERR_INVALID_ARG;
  }
  return guarded([&] {
    *out = new sppr_catalog{sparkppr::load_catalog(path)};
    return SPPR_OK;
  });
}

void sppr_catalog_free(sppr_catalog* c) { delete c; }

size_t sppr_catalog_size(const sppr_catalog* c) {
  return c ? c->c.entries.size() : 0;
}

sppr_status sppr_catalog_row_info(const sppr_catalog* c, size_t idx,
                                  sppr_catalog_row* out) {
  if (!c || !out) {
    set_error("null argument");
    return SPPR_ERR_INVALID_ARG;
  }
  if (idx >= c->c.entries.size()) {
    set_error("catalog row index out of range");
    return SPPR_ERR_INVALID_ARG;
  }
  return guarded([&] {
    const sparkppr::CatalogEntry& e = c->c.entries[idx];
    std::snprintf(out->scheme, sizeof(out->scheme), "%s",
                  sparkppr::scheme_name(e.scheme));
    out->epsilon = e.epsilon;
    out->n = c->c.k + e.epsilon;
    out->matrix_count = static_cast<uint32_t>(e.matrices.size());
    out->lowest_spark = e.lowest_spark();
    out->highest_spark = e.highest_spark();
    const sparkppr::Rational one =
        c->c.field.q() > 1 ? e.poe_delta(1) : sparkppr::Rational(0);
    out->poe_one = one.value();
    std::snprintf(out->poe_one_exact, sizeof(out->poe_one_exact), "%s",
                  one.str().c_str());
    return SPPR_OK;
  });
}

sppr_status sppr_sim_run_file(const char* config_path, int has_seed_override,
                              uint64_t seed_override, int has_seed_fallback,
                              uint64_t seed_fallback, uint32_t workers_override,
                              sppr_sim_result** out) {
  if (!config_path || !out) {
    set_error("null argument");
    return SPPR_ERR_INVALID_ARG;
  }
  return guarded([&]() -> sppr_status {
    sparkppr::RunConfig rc = sparkppr::load_run_config(config_path);
    if (has_seed_override) {
      rc.experiment.root_seed = seed_override;
    } else if (!rc.has_seed) {
      if (has_seed_fallback) {
        rc.experiment.root_seed = seed_fallback;
      } else {
        set_error(
            "no seed: provide one in the config file, via --seed, or through "
            "SPARKPPR_SEED");
        return SPPR_ERR_INVALID_ARG;
      }
    }
    if (workers_override) rc.experiment.workers = workers_override;

    std::optional<sparkppr::Catalog> catalog;
    bool needs_catalog = false;
    for (const sparkppr::Scheme s : rc.experiment.schemes)
      needs_catalog |= s != sparkppr::Scheme::RLC;
    if (needs_catalog) {
      if (rc.experiment.catalog_path.empty()) {
        set_error("configuration uses catalog schemes but names no catalog");
        return SPPR_ERR_MISSING;
      }
      std::ifstream probe(rc.experiment.catalog_path);
      if (!probe) {
        set_error("cannot open catalog '" + rc.experiment.catalog_path + "'");
        return SPPR_ERR_MISSING;
      }
      catalog = sparkppr::load_catalog(rc.experiment.catalog_path);
    }

    auto* handle = new sppr_sim_result;
    try {
      handle->r = sparkppr::run_experiment(rc.experiment,
                                           catalog ? &*catalog : nullptr);
      handle->csv = sparkppr::results_csv(handle->r);
      handle->summary = sparkppr::summarize(handle->r);
    } catch (...) {
      delete handle;
      throw;
    }
    *out = handle;
    return SPPR_OK;
  });
}

void sppr_sim_result_free(sppr_sim_result* r) { delete r; }

const char* sppr_sim_csv(const sppr_sim_result* r) {
  return r ? r->csv.c_str() : "";
}

const char* sppr_sim_summary(const sppr_sim_result* r) {
  return r ? r->summary.c_str() : "";
}

const char* sppr_sim_out_path(const sppr_sim_result* r) {
  return r ? r->r.config.out_path.c_str() : "";
}

sppr_status sppr_sim_write_csv(const sppr_sim_result* r, const char* path) {
  if (!r || !path) {
    set_error("null argument");
    return SPPR_ERR_INVALID_ARG;
  }
  return guarded([&]() -> sppr_status {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      set_error(std::string("cannot open '") + path + "' for writing");
      return SPPR_ERR_IO;
    }
    out << r->csv;
    if (!out) {
      set_error(std::string("write failure on '") + path + "'");
      return SPPR_ERR_IO;
    }
    return SPPR_OK;
  });
}

}  // extern "C"
