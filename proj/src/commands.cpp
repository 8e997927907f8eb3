#include "cgsc/commands.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "cgsc/conv_op.hpp"
#include "cgsc/error.hpp"
#include "cgsc/tensor_io.hpp"

namespace fs = std::filesystem;

namespace cgsc {

namespace {

constexpr std::size_t kDefaultKernelSize = 7;
constexpr double kDefaultLambda = 0.01;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::size_t parse_size(const std::string& text, std::string_view what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size() && v >= 0) return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
  }
  fail(ErrorCode::ConfigError, "bad " + std::string(what) + " '" + text + "'");
}

std::size_t get_size(const RunConfig& cfg, std::string_view key, std::int64_t fallback) {
  const auto v = cfg.get_int(key, fallback);
  if (v < 0) fail(ErrorCode::ConfigError, "config key '" + std::string(key) + "' must be >= 0");
  return static_cast<std::size_t>(v);
}

fs::path out_dir(const RunConfig& cfg) { return cfg.get_string("out", "out"); }

// Explicit key wins; otherwise <data>/<default_name> when `data` is set.
std::optional<fs::path> input_path(const RunConfig& cfg, std::string_view key,
                                   std::string_view default_name) {
  if (auto v = cfg.get(key)) return fs::path(*v);
  if (auto d = cfg.get("data")) return fs::path(*d) / default_name;
  return std::nullopt;
}

fs::path required_input(const RunConfig& cfg, std::string_view key, std::string_view default_name) {
  auto p = input_path(cfg, key, default_name);
  if (!p)
    fail(ErrorCode::ConfigError, "missing input: set '" + std::string(key) + "' or 'data'");
  return *p;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::IoFailure, "cannot create directory '" + dir.string() + "': " + ec.message());
}

// `w` from an explicit key, or <data>/w.cgt if present, or ones.
Image load_weights(const RunConfig& cfg, std::size_t rows, std::size_t cols) {
  if (auto v = cfg.get("w")) return image_from(read_tensor(*v));
  if (auto d = cfg.get("data")) {
    const fs::path candidate = fs::path(*d) / "w.cgt";
    if (fs::exists(candidate)) return image_from(read_tensor(candidate));
  }
  return ones_like(rows, cols);
}

SolverConfig solver_config(const RunConfig& cfg) {
  SolverConfig sc;
  sc.max_iters = static_cast<int>(cfg.get_int("max_iters", sc.max_iters));
  sc.rel_tol = cfg.get_double("rel_tol", sc.rel_tol);
  sc.step = cfg.get_double("step", sc.step);
  sc.enforce_norm_bound = cfg.get_bool("enforce_norm_bound", sc.enforce_norm_bound);
  sc.trace_every = static_cast<int>(cfg.get_int("trace_every", sc.trace_every));
  sc.project_before_prox = cfg.get_bool("project_before_prox", sc.project_before_prox);
  return sc;
}

}  // namespace

KernelDictionary load_kernels(std::string_view paths) {
  const auto files = split(paths, ',');
  if (files.size() == 1) return dictionary_from(read_tensor(files[0]));
  KernelDictionary dict;
  for (const auto& f : files) {
    const Tensor t = read_tensor(f);
    if (t.dims.size() != 2)
      fail(ErrorCode::ShapeMismatch, "kernel list entries must be 2-dimensional: '" + f + "'");
    dict.kernels.push_back(dictionary_from(t).kernels.front());
  }
  return dict;
}

GroupPartition build_groups(std::string_view spec, std::string_view tile_subsets,
                            std::size_t rows, std::size_t cols, std::size_t k_count) {
  if (spec == "singleton") return singleton_groups(rows, cols, k_count);
  if (spec == "across-k") return across_k_groups(rows, cols, k_count);
  if (spec.starts_with("tiles:")) {
    const auto hw = split(spec.substr(6), ',');
    if (hw.size() != 2) fail(ErrorCode::ConfigError, "groups spec must be tiles:H,W");
    std::vector<std::vector<std::size_t>> subsets;
    if (tile_subsets.empty()) {
      subsets.emplace_back();
      for (std::size_t k = 1; k <= k_count; ++k) subsets.back().push_back(k);
    } else {
      for (const auto& part : split(tile_subsets, ';')) {
        subsets.emplace_back();
        for (const auto& idx : split(part, ',')) subsets.back().push_back(parse_size(idx, "kernel index"));
      }
    }
    return tile_groups(rows, cols, k_count, parse_size(hw[0], "tile height"),
                       parse_size(hw[1], "tile width"), subsets);
  }
  if (spec.starts_with("file:")) {
    const LabelTensor lt = read_labels(std::string(spec.substr(5)));
    if (lt.dims.size() != 3 || lt.dims[0] != rows || lt.dims[1] != cols || lt.dims[2] != k_count)
      fail(ErrorCode::DimensionMismatch, "label file must be " + std::to_string(rows) + "x" +
                                             std::to_string(cols) + "x" + std::to_string(k_count));
    return groups_from_labels(rows, cols, k_count, lt.data);
  }
  fail(ErrorCode::ConfigError, "unknown groups spec '" + std::string(spec) + "'");
}

void write_trace_csv(const fs::path& path, const SolveTrace& trace) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for writing");
  out << "iter,objective,fidelity,regularizer,iterate_change\n";
  for (const auto& r : trace.records)
    out << r.iter << ',' << fmt_double(r.objective) << ',' << fmt_double(r.fidelity) << ','
        << fmt_double(r.regularizer) << ',' << fmt_double(r.iterate_change) << '\n';
  if (!out) fail(ErrorCode::IoFailure, "write to '" + path.string() + "' failed");
}

void write_sources_csv(const fs::path& path, const std::vector<Source>& sources) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for writing");
  out << "i,j,amplitude\n";
  for (const auto& s : sources) out << s.row << ',' << s.col << ',' << fmt_double(s.amplitude) << '\n';
  if (!out) fail(ErrorCode::IoFailure, "write to '" + path.string() + "' failed");
}

std::vector<Source> read_sources_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  std::string line;
  std::vector<Source> sources;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line == "i,j,amplitude") continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 3) fail(ErrorCode::IoFailure, "bad source row '" + line + "' in " + path.string());
    try {
      sources.push_back({parse_size(cells[0], "row"), parse_size(cells[1], "col"), std::stod(cells[2])});
    } catch (const std::logic_error&) {
      fail(ErrorCode::IoFailure, "bad amplitude in row '" + line + "'");
    }
  }
  return sources;
}

SynthSummary cmd_synth(RunConfig& cfg) {
  if (!cfg.has("seed")) {
    std::random_device rd;
    const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    cfg.set("seed", std::to_string(seed));
  }
  SceneSpec spec;
  spec.seed = cfg.get_u64("seed", 0);
  spec.rows = get_size(cfg, "rows", static_cast<std::int64_t>(spec.rows));
  spec.cols = get_size(cfg, "cols", static_cast<std::int64_t>(spec.cols));
  spec.n_sources = get_size(cfg, "n_sources", static_cast<std::int64_t>(spec.n_sources));
  spec.min_separation = get_size(cfg, "min_separation", static_cast<std::int64_t>(spec.min_separation));
  spec.amplitude_min = cfg.get_double("amplitude_min", spec.amplitude_min);
  spec.amplitude_max = cfg.get_double("amplitude_max", spec.amplitude_max);
  spec.alpha_mode = parse_alpha_mode(cfg.get_string("alpha_mode", alpha_mode_name(spec.alpha_mode)));
  spec.noise_sigma = cfg.get_double("noise_sigma", spec.noise_sigma);

  KernelDictionary raw;
  if (auto k = cfg.get("kernels")) {
    raw = load_kernels(*k);
  } else {
    raw = gaussian_psf_bank(get_size(cfg, "k", static_cast<std::int64_t>(spec.k_count)),
                            get_size(cfg, "kernel_size", kDefaultKernelSize));
  }
  spec.k_count = raw.size();

  const KernelDictionary dict = normalize_kernels(raw, ones_like(spec.rows, spec.cols));
  const SynthInstance inst = generate(spec, dict);

  const fs::path dir = out_dir(cfg);
  ensure_dir(dir);
  write_tensor(dir / "s.cgt", to_tensor(inst.s));
  write_tensor(dir / "w.cgt", to_tensor(inst.w));
  write_tensor(dir / "x_true.cgt", to_tensor(inst.truth.x_true));
  write_tensor(dir / "y.cgt", to_tensor(inst.truth.y));
  write_tensor(dir / "alphas.cgt", to_tensor(inst.truth.alphas));
  write_tensor(dir / "kernels.cgt", to_tensor(dict));
  write_sources_csv(dir / "sources.csv", inst.truth.sources);
  return {spec.seed, dir, inst.truth.sources.size()};
}

SolveSummary cmd_solve(const RunConfig& cfg) {
  Problem p;
  p.s = image_from(read_tensor(required_input(cfg, "s", "s.cgt")));
  p.w = load_weights(cfg, p.s.rows(), p.s.cols());
  const auto kernels = cfg.get("kernels");
  const KernelDictionary raw = kernels ? load_kernels(*kernels)
                                       : load_kernels(required_input(cfg, "kernels", "kernels.cgt").string());
  if (!p.w.same_shape(p.s)) fail(ErrorCode::DimensionMismatch, "w and s have different shapes");
  p.dict = normalize_kernels(raw, p.w);
  p.groups = build_groups(cfg.get_string("groups", "singleton"), cfg.get_string("tile_subsets", ""),
                          p.s.rows(), p.s.cols(), p.dict.size());
  p.lambda = cfg.get_double("lambda", kDefaultLambda);

  const SolveResult res = apg_solve(p, solver_config(cfg));
  const YAlpha ya = reconstruct_y_alpha(res.x, cfg.get_double("alpha_eps", 1e-12));

  const fs::path dir = out_dir(cfg);
  ensure_dir(dir);
  write_tensor(dir / "x_hat.cgt", to_tensor(res.x));
  write_tensor(dir / "y_hat.cgt", to_tensor(ya.y));
  write_tensor(dir / "alpha_hat.cgt", to_tensor(ya.alphas));
  write_trace_csv(dir / "trace.csv", res.trace);

  SolveSummary sum;
  sum.iterations = res.iterations;
  sum.converged = res.converged;
  sum.final_objective = objective(p, res.x);
  sum.operator_norm = res.operator_norm;
  sum.out_dir = dir;
  return sum;
}

EvalSummary cmd_eval(const RunConfig& cfg) {
  const fs::path x_hat_path = cfg.has("x_hat") ? fs::path(*cfg.get("x_hat")) : out_dir(cfg) / "x_hat.cgt";
  const FeatureStack x_hat = stack_from(read_tensor(x_hat_path));
  const FeatureStack x_true = stack_from(read_tensor(required_input(cfg, "x_true", "x_true.cgt")));
  const auto truth = read_sources_csv(required_input(cfg, "sources", "sources.csv"));

  EvalSummary sum;
  sum.recon = recon_error(x_hat, x_true);
  const Image y_hat = reconstruct_y_alpha(x_hat).y;
  sum.detect_threshold = cfg.has("detect_threshold")
                             ? cfg.get_double("detect_threshold", 0.0)
                             : cfg.get_double("detect_rel_threshold", 0.1) * y_hat.max_abs();
  sum.detect_min_separation = get_size(cfg, "detect_min_separation", 2);
  sum.match_radius = get_size(cfg, "match_radius", 1);
  const auto detected = detect_sources(y_hat, sum.detect_threshold, sum.detect_min_separation);
  sum.localization = match_and_score(detected, truth, sum.match_radius);

  sum.report_path = cfg.has("report") ? fs::path(*cfg.get("report")) : out_dir(cfg) / "eval.csv";
  if (sum.report_path.has_parent_path()) ensure_dir(sum.report_path.parent_path());
  std::ofstream out(sum.report_path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoFailure, "cannot open '" + sum.report_path.string() + "' for writing");
  const auto& loc = sum.localization;
  out << kEvalCsvHeader << '\n'
      << fmt_double(sum.recon.rel_l2) << ',' << fmt_double(sum.recon.support_iou) << ','
      << fmt_double(loc.precision) << ',' << fmt_double(loc.recall) << ',' << fmt_double(loc.f1) << ','
      << fmt_double(loc.mean_match_distance) << ',' << fmt_double(sum.detect_threshold) << ','
      << sum.detect_min_separation << ',' << sum.match_radius << '\n';
  if (!out) fail(ErrorCode::IoFailure, "write to '" + sum.report_path.string() + "' failed");
  return sum;
}

NormCheckSummary cmd_norm_check(const RunConfig& cfg) {
  const KernelDictionary raw = load_kernels(required_input(cfg, "kernels", "kernels.cgt").string());
  Image w;
  if (cfg.has("w")) {
    w = image_from(read_tensor(*cfg.get("w")));
  } else if (auto s = input_path(cfg, "s", "s.cgt"); s && fs::exists(*s)) {
    const Image shape = image_from(read_tensor(*s));
    w = load_weights(cfg, shape.rows(), shape.cols());
  } else {
    w = ones_like(get_size(cfg, "rows", 32), get_size(cfg, "cols", 32));
  }
  NormCheckSummary sum;
  sum.normalized = cfg.get_bool("normalize", true);
  const KernelDictionary dict = sum.normalized ? normalize_kernels(raw, w) : raw;
  sum.norm_target = dict.norm_target;
  PowerIterationOptions opts;
  opts.iters = static_cast<int>(cfg.get_int("norm_iters", opts.iters));
  opts.tol = cfg.get_double("norm_tol", opts.tol);
  opts.seed = cfg.get_u64("seed", opts.seed);
  sum.estimate = power_iteration(dict, w, opts);
  return sum;
}

}  // namespace cgsc
