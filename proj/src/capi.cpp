// SPDX-License-Identifier: Apache-2.0

#include "f4solv/f4solv.h"

#include <new>
#include <string>

#include "commands.hpp"

struct f4_params {
  f4solv::ModelParams value;
};

struct f4_operator {
  f4solv::SecondOrderOp value;
};

struct f4_report {
  std::string text;
  f4_status verdict;
};

namespace {

thread_local std::string last_error;

f4_status fail(f4_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

/// Runs `body`, mapping exceptions onto status codes.
template <class F>
f4_status guarded(F&& body) {
  using namespace f4solv;
  try {
    last_error.clear();
    return body();
  } catch (const ParseError& e) {
    return fail(F4_USAGE, e.what());
  } catch (const UsageError& e) {
    return fail(F4_USAGE, e.what());
  } catch (const CalibrationError& e) {
    return fail(F4_MISMATCH, e.what());
  } catch (const DerivationError& e) {
    return fail(F4_MISMATCH, e.what());
  } catch (const std::bad_alloc&) {
    return fail(F4_ANOMALY, "out of memory");
  } catch (const std::exception& e) {
    return fail(F4_ANOMALY, e.what());
  }
}

f4solv::RunConfig make_config(const f4_params* params, const f4_options* opts) {
  using namespace f4solv;
  if (!params) throw UsageError("params handle is NULL");
  f4_options defaults;
  f4_options_init(&defaults);
  const f4_options& o = opts ? *opts : defaults;
  RunConfig cfg;
  cfg.params = params->value;
  if (o.level >= 0) cfg.level = o.level;
  if (o.charvec) cfg.charvec = CharVector::parse(o.charvec);
  if (o.frame) cfg.frame = parse_frame_choice(o.frame);
  if (o.format) cfg.format = parse_output_format(o.format);
  cfg.seed = o.seed;
  if (o.points <= 0) throw UsageError("points must be positive");
  cfg.points = o.points;
  if (o.bound < 1) throw UsageError("bound must be positive");
  cfg.bound = o.bound;
  return cfg;
}

f4_status emit(const f4solv::CommandResult& r, f4_report** out) {
  *out = new f4_report{r.text, static_cast<f4_status>(r.status)};
  return static_cast<f4_status>(r.status);
}

template <class Cmd>
f4_status run_command(const f4_params* params, const f4_options* opts, f4_report** out, Cmd&& cmd) {
  if (!out) return fail(F4_USAGE, "output pointer is NULL");
  *out = nullptr;
  return guarded([&] { return emit(cmd(make_config(params, opts)), out); });
}

}  // namespace

extern "C" {

void f4_options_init(f4_options* opts) {
  if (!opts) return;
  opts->frame = "native";
  opts->charvec = "1,2,2,3";
  opts->level = -1;
  opts->seed = 0;
  opts->points = 20;
  opts->bound = 6;
  opts->format = "table";
}

f4_status f4_params_create(const char* model, const char* nu, const char* mu, const char* omega,
                           const char* beta2, f4_params** out) {
  if (!out) return fail(F4_USAGE, "output pointer is NULL");
  *out = nullptr;
  return guarded([&] {
    using namespace f4solv;
    if (!model || !nu || !mu) throw UsageError("model, nu and mu are required");
    ModelParams p;
    p.model = parse_model(model);
    p.nu = parse_rational(nu);
    p.mu = parse_rational(mu);
    if (omega) p.omega = parse_rational(omega);
    if (beta2) p.beta2 = parse_rational(beta2);
    p.validate();
    *out = new f4_params{std::move(p)};
    return F4_OK;
  });
}

f4_status f4_params_from_json(const char* json, f4_params** out) {
  if (!out) return fail(F4_USAGE, "output pointer is NULL");
  *out = nullptr;
  return guarded([&] {
    using namespace f4solv;
    if (!json) throw UsageError("json is NULL");
    Json j;
    try {
      j = Json::parse(json);
    } catch (const Json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    *out = new f4_params{params_from_json(j)};
    return F4_OK;
  });
}

void f4_params_destroy(f4_params* params) { delete params; }

f4_status f4_operator_build(const f4_params* params, const char* frame, f4_operator** out) {
  if (!out) return fail(F4_USAGE, "output pointer is NULL");
  *out = nullptr;
  return guarded([&] {
    using namespace f4solv;
    if (!params) throw UsageError("params handle is NULL");
    RunConfig cfg;
    cfg.params = params->value;
    cfg.frame = parse_frame_choice(frame ? frame : "native");
    *out = new f4_operator{config_operator(cfg)};
    return F4_OK;
  });
}

void f4_operator_destroy(f4_operator* op) { delete op; }

f4_status f4_operator_to_json(const f4_operator* op, f4_report** out) {
  if (!out) return fail(F4_USAGE, "output pointer is NULL");
  *out = nullptr;
  return guarded([&] {
    if (!op) throw f4solv::UsageError("operator handle is NULL");
    *out = new f4_report{f4solv::to_json(op->value).dump(2) + "\n", F4_OK};
    return F4_OK;
  });
}

f4_status f4_spectrum(const f4_params* params, const f4_options* opts, f4_report** out) {
  return run_command(params, opts, out, [](const f4solv::RunConfig& c) { return f4solv::cmd_spectrum(c); });
}

f4_status f4_eigenfunctions(const f4_params* params, const f4_options* opts, f4_report** out) {
  return run_command(params, opts, out, [](const f4solv::RunConfig& c) { return f4solv::cmd_eigenfunctions(c); });
}

f4_status f4_verify(const f4_params* params, const char* suite, const f4_options* opts, f4_report** out) {
  if (!suite) return fail(F4_USAGE, "suite is NULL");
  const std::string name = suite;
  return run_command(params, opts, out, [&](const f4solv::RunConfig& c) { return f4solv::cmd_verify(c, name); });
}

f4_status f4_scan_flags(const f4_params* params, const f4_options* opts, f4_report** out) {
  return run_command(params, opts, out, [](const f4solv::RunConfig& c) { return f4solv::cmd_scan_flags(c); });
}

f4_status f4_dump_operator(const f4_params* params, const f4_options* opts, f4_report** out) {
  return run_command(params, opts, out, [](const f4solv::RunConfig& c) { return f4solv::cmd_dump_operator(c); });
}

const char* f4_report_text(const f4_report* report) { return report ? report->text.c_str() : ""; }

f4_status f4_report_verdict(const f4_report* report) { return report ? report->verdict : F4_USAGE; }

void f4_report_destroy(f4_report* report) { delete report; }

const char* f4_last_error(void) { return last_error.c_str(); }

const char* f4_version(void) { return "0.1.0"; }

}  // extern "C"
