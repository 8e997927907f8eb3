#include "cgsc/cgsc.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "cgsc/apg_solver.hpp"
#include "cgsc/commands.hpp"
#include "cgsc/conv_op.hpp"
#include "cgsc/error.hpp"
#include "cgsc/group_builder.hpp"
#include "cgsc/parallel.hpp"
#include "cgsc/tensor_io.hpp"

struct cgsc_tensor {
  cgsc::Tensor value;
};

struct cgsc_labels {
  cgsc::LabelTensor value;
};

struct cgsc_trace {
  cgsc::SolveTrace value;
};

struct cgsc_config {
  cgsc::RunConfig value;
};

namespace {

thread_local std::string last_error;

cgsc_status to_status(cgsc::ErrorCode code) { return static_cast<cgsc_status>(code); }

template <typename F>
cgsc_status guarded(F&& body) {
  try {
    body();
    return CGSC_OK;
  } catch (const cgsc::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown exception";
  }
  return CGSC_ERR_INTERNAL;
}

cgsc_status null_argument(const char* name) {
  last_error = std::string("null argument: ") + name;
  return CGSC_ERR_INVALID_ARGUMENT;
}

cgsc::SolverConfig to_solver_config(const cgsc_solver_options* o) {
  cgsc::SolverConfig sc;
  if (!o) return sc;
  sc.max_iters = o->max_iters;
  sc.rel_tol = o->rel_tol;
  sc.step = o->step;
  sc.enforce_norm_bound = o->enforce_norm_bound != 0;
  sc.trace_every = o->trace_every;
  sc.project_before_prox = o->project_before_prox != 0;
  return sc;
}

}  // namespace

extern "C" {

const char* cgsc_last_error(void) { return last_error.c_str(); }

const char* cgsc_status_name(cgsc_status status) {
  if (status == CGSC_OK) return "Ok";
  if (status == CGSC_ERR_INTERNAL) return "Internal";
  return cgsc::error_code_name(static_cast<cgsc::ErrorCode>(status)).data();
}

// ---- tensors ----

cgsc_status cgsc_tensor_create(size_t ndims, const uint32_t* dims, const double* data,
                               cgsc_tensor** out) {
  if (!dims) return null_argument("dims");
  if (!out) return null_argument("out");
  return guarded([&] {
    if (ndims != 2 && ndims != 3)
      cgsc::fail(cgsc::ErrorCode::UnsupportedNdims, "tensor ndims must be 2 or 3");
    cgsc::Tensor t{{dims, dims + ndims}, {}};
    std::size_t count = 1;
    for (auto d : t.dims) count *= d;
    t.data.assign(count, 0.0);
    if (data) std::memcpy(t.data.data(), data, count * sizeof(double));
    *out = new cgsc_tensor{std::move(t)};
  });
}

cgsc_status cgsc_tensor_read(const char* path, cgsc_tensor** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new cgsc_tensor{cgsc::read_tensor(path)}; });
}

cgsc_status cgsc_tensor_write(const cgsc_tensor* t, const char* path) {
  if (!t) return null_argument("t");
  if (!path) return null_argument("path");
  return guarded([&] { cgsc::write_tensor(path, t->value); });
}

void cgsc_tensor_destroy(cgsc_tensor* t) { delete t; }

size_t cgsc_tensor_ndims(const cgsc_tensor* t) { return t ? t->value.dims.size() : 0; }

uint32_t cgsc_tensor_dim(const cgsc_tensor* t, size_t axis) {
  return t && axis < t->value.dims.size() ? t->value.dims[axis] : 0;
}

size_t cgsc_tensor_size(const cgsc_tensor* t) { return t ? t->value.data.size() : 0; }

const double* cgsc_tensor_data(const cgsc_tensor* t) { return t ? t->value.data.data() : nullptr; }

// ---- labels ----

cgsc_status cgsc_labels_create(const uint32_t dims[3], const int32_t* data, cgsc_labels** out) {
  if (!dims) return null_argument("dims");
  if (!data) return null_argument("data");
  if (!out) return null_argument("out");
  return guarded([&] {
    cgsc::LabelTensor t{{dims[0], dims[1], dims[2]}, {}};
    t.data.assign(data, data + static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]);
    *out = new cgsc_labels{std::move(t)};
  });
}

cgsc_status cgsc_labels_read(const char* path, cgsc_labels** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new cgsc_labels{cgsc::read_labels(path)}; });
}

cgsc_status cgsc_labels_write(const cgsc_labels* l, const char* path) {
  if (!l) return null_argument("l");
  if (!path) return null_argument("path");
  return guarded([&] { cgsc::write_labels(path, l->value); });
}

void cgsc_labels_destroy(cgsc_labels* l) { delete l; }

// ---- solver ----

void cgsc_solver_options_default(cgsc_solver_options* out) {
  if (!out) return;
  const cgsc::SolverConfig sc;
  out->max_iters = sc.max_iters;
  out->rel_tol = sc.rel_tol;
  out->step = sc.step;
  out->enforce_norm_bound = sc.enforce_norm_bound ? 1 : 0;
  out->trace_every = sc.trace_every;
  out->project_before_prox = sc.project_before_prox ? 1 : 0;
}

size_t cgsc_trace_length(const cgsc_trace* trace) { return trace ? trace->value.records.size() : 0; }

cgsc_status cgsc_trace_entry_at(const cgsc_trace* trace, size_t index, cgsc_trace_entry* out) {
  if (!trace) return null_argument("trace");
  if (!out) return null_argument("out");
  if (index >= trace->value.records.size()) {
    last_error = "trace index out of range";
    return CGSC_ERR_INVALID_ARGUMENT;
  }
  const auto& r = trace->value.records[index];
  *out = {r.iter, r.objective, r.fidelity, r.regularizer, r.iterate_change};
  return CGSC_OK;
}

void cgsc_trace_destroy(cgsc_trace* trace) { delete trace; }

cgsc_status cgsc_solve(const cgsc_tensor* s, const cgsc_tensor* w, const cgsc_tensor* kernels,
                       const cgsc_labels* labels, double lambda, const cgsc_solver_options* options,
                       cgsc_tensor** x_out, cgsc_trace** trace_out) {
  if (!s) return null_argument("s");
  if (!kernels) return null_argument("kernels");
  if (!x_out) return null_argument("x_out");
  return guarded([&] {
    cgsc::Problem p;
    p.s = cgsc::image_from(s->value);
    p.w = w ? cgsc::image_from(w->value) : cgsc::ones_like(p.s.rows(), p.s.cols());
    if (!p.w.same_shape(p.s))
      cgsc::fail(cgsc::ErrorCode::DimensionMismatch, "w and s have different shapes");
    p.dict = cgsc::normalize_kernels(cgsc::dictionary_from(kernels->value), p.w);
    const std::size_t K = p.dict.size();
    if (labels) {
      const auto& d = labels->value.dims;
      if (d.size() != 3 || d[0] != p.s.rows() || d[1] != p.s.cols() || d[2] != K)
        cgsc::fail(cgsc::ErrorCode::DimensionMismatch, "label volume must be M x N x K");
      p.groups = cgsc::groups_from_labels(d[0], d[1], d[2], labels->value.data);
    } else {
      p.groups = cgsc::singleton_groups(p.s.rows(), p.s.cols(), K);
    }
    p.lambda = lambda;
    cgsc::SolveResult res = cgsc::apg_solve(p, to_solver_config(options));
    auto* x = new cgsc_tensor{cgsc::to_tensor(res.x)};
    if (trace_out) {
      try {
        *trace_out = new cgsc_trace{std::move(res.trace)};
      } catch (...) {
        delete x;
        throw;
      }
    }
    *x_out = x;
  });
}

cgsc_status cgsc_operator_norm(const cgsc_tensor* kernels, const cgsc_tensor* w, int normalize,
                               int iters, double tol, uint64_t seed, double* estimate) {
  if (!kernels) return null_argument("kernels");
  if (!w) return null_argument("w");
  if (!estimate) return null_argument("estimate");
  return guarded([&] {
    const cgsc::Image weights = cgsc::image_from(w->value);
    cgsc::KernelDictionary dict = cgsc::dictionary_from(kernels->value);
    if (normalize) dict = cgsc::normalize_kernels(dict, weights);
    *estimate = cgsc::power_iteration(dict, weights, {iters, tol, seed}).value;
  });
}

// ---- configuration and commands ----

cgsc_status cgsc_config_create(cgsc_config** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new cgsc_config{}; });
}

void cgsc_config_destroy(cgsc_config* cfg) { delete cfg; }

cgsc_status cgsc_config_load(cgsc_config* cfg, const char* path) {
  if (!cfg) return null_argument("cfg");
  if (!path) return null_argument("path");
  return guarded([&] { cfg->value.load_file(path); });
}

cgsc_status cgsc_config_set(cgsc_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_argument("cfg");
  if (!key) return null_argument("key");
  if (!value) return null_argument("value");
  return guarded([&] { cfg->value.set(key, value); });
}

cgsc_status cgsc_config_get(const cgsc_config* cfg, const char* key, char* buf, size_t buflen) {
  if (!cfg) return null_argument("cfg");
  if (!key) return null_argument("key");
  if (!buf) return null_argument("buf");
  const auto v = cfg->value.get(key);
  if (!v) {
    last_error = std::string("config key '") + key + "' is not set";
    return CGSC_ERR_CONFIG;
  }
  if (v->size() + 1 > buflen) {
    last_error = "buffer too small for config value";
    return CGSC_ERR_INVALID_ARGUMENT;
  }
  std::memcpy(buf, v->c_str(), v->size() + 1);
  return CGSC_OK;
}

cgsc_status cgsc_run_synth(cgsc_config* cfg, uint64_t* seed_used) {
  if (!cfg) return null_argument("cfg");
  return guarded([&] {
    const auto sum = cgsc::cmd_synth(cfg->value);
    if (seed_used) *seed_used = sum.seed;
  });
}

cgsc_status cgsc_run_solve(const cgsc_config* cfg, cgsc_solve_summary* summary) {
  if (!cfg) return null_argument("cfg");
  return guarded([&] {
    const auto sum = cgsc::cmd_solve(cfg->value);
    if (summary) {
      summary->iterations = sum.iterations;
      summary->converged = sum.converged ? 1 : 0;
      summary->objective = sum.final_objective.total;
      summary->fidelity = sum.final_objective.fidelity;
      summary->regularizer = sum.final_objective.regularizer;
      summary->operator_norm = sum.operator_norm.value_or(-1.0);
    }
  });
}

cgsc_status cgsc_run_eval(const cgsc_config* cfg, cgsc_eval_summary* summary) {
  if (!cfg) return null_argument("cfg");
  return guarded([&] {
    const auto sum = cgsc::cmd_eval(cfg->value);
    if (summary) {
      const auto& loc = sum.localization;
      *summary = {sum.recon.rel_l2, sum.recon.support_iou, loc.precision, loc.recall, loc.f1,
                  loc.mean_match_distance, loc.true_positives, loc.false_positives,
                  loc.false_negatives};
    }
  });
}

cgsc_status cgsc_run_norm_check(const cgsc_config* cfg, double* estimate) {
  if (!cfg) return null_argument("cfg");
  if (!estimate) return null_argument("estimate");
  return guarded([&] { *estimate = cgsc::cmd_norm_check(cfg->value).estimate.value; });
}

void cgsc_set_threads(size_t cap) { cgsc::set_thread_cap(cap); }

}  // extern "C"
