#include "geodr/geodr.h"

#include <cstdio>
#include <cstring>
#include <exception>
#include <filesystem>
#include <string>

#include "geodr/experiment.hpp"

struct geodr_config {
  geodr::ExperimentConfig cfg;
};

struct geodr_result {
  geodr::ExperimentConfig cfg;
  geodr::ExperimentResult res;
  mutable std::string rendered;
};

struct geodr_table {
  geodr::TableReport report;
  std::string rendered;
};

namespace {

thread_local std::string last_error;

geodr_status fail(geodr_status code, const std::string& msg) {
  last_error = msg;
  return code;
}

// Maps exceptions from the core onto status codes.
template <class F>
geodr_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return GEODR_OK;
  } catch (const geodr::ConfigError& e) {
    switch (e.kind()) {
      case geodr::ConfigError::Kind::parse:
        return fail(GEODR_E_PARSE, e.what());
      case geodr::ConfigError::Kind::validation:
        return fail(GEODR_E_VALIDATION, e.what());
      case geodr::ConfigError::Kind::io:
        return fail(GEODR_E_IO, e.what());
    }
    return fail(GEODR_E_INTERNAL, e.what());
  } catch (const geodr::SolverAbort& e) {
    return fail(GEODR_E_SOLVER_ABORT, e.what());
  } catch (const geodr::IoError& e) {
    return fail(GEODR_E_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(GEODR_E_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(GEODR_E_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(GEODR_E_INTERNAL, e.what());
  } catch (...) {
    return fail(GEODR_E_INTERNAL, "unknown error");
  }
}

geodr_run_status run_status(geodr::SolveStatus s) {
  switch (s) {
    case geodr::SolveStatus::converged:
      return GEODR_RUN_CONVERGED;
    case geodr::SolveStatus::max_iter:
      return GEODR_RUN_MAX_ITER;
    case geodr::SolveStatus::param_invalid:
      return GEODR_RUN_PARAM_INVALID;
  }
  return GEODR_RUN_MAX_ITER;
}

}  // namespace

extern "C" {

const char* geodr_version(void) { return "0.1.0"; }

const char* geodr_last_error(void) { return last_error.c_str(); }

geodr_status geodr_config_load(const char* path, geodr_config** out) {
  if (!path || !out) return fail(GEODR_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new geodr_config{geodr::load_config(path)}; });
}

geodr_status geodr_config_parse(const char* text, const char* base_dir, geodr_config** out) {
  if (!text || !out) return fail(GEODR_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new geodr_config{geodr::parse_config(text, base_dir ? base_dir : ".")}; });
}

void geodr_config_free(geodr_config* cfg) { delete cfg; }

geodr_status geodr_config_set_output(geodr_config* cfg, const char* format, const char* path) {
  if (!cfg) return fail(GEODR_E_INVALID_ARGUMENT, "null config");
  if (format) {
    auto f = geodr::parse_format(format);
    if (!f) return fail(GEODR_E_INVALID_ARGUMENT, std::string("unknown format '") + format + "'");
    cfg->cfg.format = *f;
  }
  if (path) cfg->cfg.out_path = path;
  return GEODR_OK;
}

const char* geodr_config_output_path(const geodr_config* cfg) { return cfg ? cfg->cfg.out_path.c_str() : ""; }

const char* geodr_config_output_format(const geodr_config* cfg) {
  return cfg ? geodr::to_string(cfg->cfg.format) : "";
}

geodr_status geodr_run(const geodr_config* cfg, geodr_result** out) {
  if (!cfg || !out) return fail(GEODR_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new geodr_result{cfg->cfg, geodr::run_experiment(cfg->cfg), {}}; });
}

void geodr_result_free(geodr_result* res) { delete res; }

geodr_status geodr_result_summary(const geodr_result* res, geodr_summary* out) {
  if (!res || !out) return fail(GEODR_E_INVALID_ARGUMENT, "null argument");
  const auto& row = res->res.row;
  out->label = row.label.c_str();
  out->iterations = row.iterations;
  out->stop_metric = row.stop_metric;
  out->wall_ms = row.wall_ms;
  out->status = run_status(row.status);
  return GEODR_OK;
}

long geodr_result_record_count(const geodr_result* res) { return res ? res->res.trace.iterations() : 0; }

geodr_status geodr_result_record(const geodr_result* res, long index, geodr_record* out) {
  if (!res || !out) return fail(GEODR_E_INVALID_ARGUMENT, "null argument");
  if (index < 0 || index >= res->res.trace.iterations()) return fail(GEODR_E_RANGE, "record index out of range");
  const auto& r = res->res.trace.records[static_cast<std::size_t>(index)];
  *out = geodr_record{r.n, r.stop_metric, r.residual, r.min_residual, r.objective, r.elapsed_ms};
  return GEODR_OK;
}

geodr_status geodr_result_solution(const geodr_result* res, double* buf, size_t cap, size_t* len) {
  if (!res || !len) return fail(GEODR_E_INVALID_ARGUMENT, "null argument");
  if (!res->res.trace.solution) return fail(GEODR_E_RANGE, "no solution recorded");
  const auto& v = res->res.trace.solution->coords;
  *len = static_cast<size_t>(v.size());
  if (!buf && cap == 0) return GEODR_OK;  // size query
  if (!buf || cap < *len) return fail(GEODR_E_RANGE, "buffer too small");
  std::memcpy(buf, v.data(), sizeof(double) * *len);
  return GEODR_OK;
}

size_t geodr_result_warning_count(const geodr_result* res) { return res ? res->res.warnings.size() : 0; }

const char* geodr_result_warning(const geodr_result* res, size_t index) {
  if (!res || index >= res->res.warnings.size()) return nullptr;
  return res->res.warnings[index].c_str();
}

const char* geodr_result_render(const geodr_result* res, const char* format) {
  if (!res) return nullptr;
  geodr::OutputFormat f = res->cfg.format;
  if (format) {
    auto parsed = geodr::parse_format(format);
    if (!parsed) {
      fail(GEODR_E_INVALID_ARGUMENT, std::string("unknown format '") + format + "'");
      return nullptr;
    }
    f = *parsed;
  }
  res->rendered = geodr::render_trace(res->cfg, res->res, f);
  return res->rendered.c_str();
}

geodr_status geodr_result_write(const geodr_result* res, const char* format, const char* path) {
  if (!res || !path) return fail(GEODR_E_INVALID_ARGUMENT, "null argument");
  geodr::OutputFormat f = res->cfg.format;
  if (format) {
    auto parsed = geodr::parse_format(format);
    if (!parsed) return fail(GEODR_E_INVALID_ARGUMENT, std::string("unknown format '") + format + "'");
    f = *parsed;
  }
  return guarded([&] { geodr::emit_trace(res->cfg, res->res, f, path); });
}

geodr_status geodr_oracle_compare(const geodr_config* cfg, geodr_oracle_report* out) {
  if (!cfg || !out) return fail(GEODR_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto rep = geodr::oracle_compare(cfg->cfg);
    out->verdict = rep.verdict == geodr::OracleReport::Verdict::pass   ? GEODR_VERDICT_PASS
                   : rep.verdict == geodr::OracleReport::Verdict::fail ? GEODR_VERDICT_FAIL
                                                                       : GEODR_VERDICT_INCONCLUSIVE;
    out->solver_objective = rep.solver_objective;
    out->oracle_objective = rep.oracle_objective;
    out->point_checked = rep.point_distance.has_value();
    out->point_distance = rep.point_distance.value_or(0.0);
    std::snprintf(out->message, sizeof(out->message), "%s", rep.message.c_str());
  });
}

geodr_status geodr_reproduce(const char* table, const char* data_dir, const char* out_dir, const char* format,
                             geodr_table** out) {
  if (!table || !out) return fail(GEODR_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  geodr::OutputFormat f = geodr::OutputFormat::csv;
  if (format) {
    auto parsed = geodr::parse_format(format);
    if (!parsed) return fail(GEODR_E_INVALID_ARGUMENT, std::string("unknown format '") + format + "'");
    f = *parsed;
  }
  return guarded([&] {
    auto rep = geodr::reproduce(table, data_dir ? data_dir : geodr::default_data_dir(), out_dir ? out_dir : "", f);
    std::string text = rep.render();
    *out = new geodr_table{std::move(rep), std::move(text)};
  });
}

void geodr_table_free(geodr_table* t) { delete t; }

size_t geodr_table_row_count(const geodr_table* t) { return t ? t->report.rows.size() : 0; }

geodr_status geodr_table_get_row(const geodr_table* t, size_t index, geodr_table_row* out) {
  if (!t || !out) return fail(GEODR_E_INVALID_ARGUMENT, "null argument");
  if (index >= t->report.rows.size()) return fail(GEODR_E_RANGE, "row index out of range");
  const auto& r = t->report.rows[index];
  *out = geodr_table_row{r.case_name.c_str(), r.label.c_str(), r.reference,  r.iterations,
                         r.stop_metric,       r.wall_ms,       r.converged, r.in_band};
  return GEODR_OK;
}

int geodr_table_all_ok(const geodr_table* t) { return t && t->report.all_ok() ? 1 : 0; }

const char* geodr_table_render(const geodr_table* t) { return t ? t->rendered.c_str() : ""; }

}  // extern "C"
