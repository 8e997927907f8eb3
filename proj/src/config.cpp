#include "cgsc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "cgsc/error.hpp"

namespace cgsc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, const std::string& value, std::string_view what) {
  fail(ErrorCode::ConfigError, "config key '" + std::string(key) + "': '" + value + "' is not " +
                                   std::string(what));
}

}  // namespace

const std::vector<std::string_view>& RunConfig::known_keys() {
  static const std::vector<std::string_view> keys = {
      // shared
      "out", "data", "seed", "kernels", "w",
      // synth
      "rows", "cols", "k", "n_sources", "min_separation", "amplitude_min", "amplitude_max",
      "alpha_mode", "noise_sigma", "kernel_size",
      // solve
      "s", "groups", "tile_subsets", "lambda", "max_iters", "rel_tol", "step",
      "enforce_norm_bound", "trace_every", "project_before_prox", "alpha_eps",
      // eval
      "x_hat", "x_true", "sources", "report", "detect_threshold", "detect_rel_threshold",
      "detect_min_separation", "match_radius",
      // norm-check
      "normalize", "norm_iters", "norm_tol"};
  return keys;
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoFailure, "cannot open config file '" + path.string() + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    if (view.find('=') == std::string_view::npos)
      fail(ErrorCode::ConfigError,
           path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    apply_override(view);
  }
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end())
    fail(ErrorCode::ConfigError, "unknown config key '" + std::string(key) + "'");
  values_.insert_or_assign(std::string(key), std::string(value));
}

void RunConfig::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    fail(ErrorCode::ConfigError, "expected key=value, got '" + std::string(assignment) + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

bool RunConfig::has(std::string_view key) const { return values_.find(key) != values_.end(); }

std::optional<std::string> RunConfig::get(std::string_view key) const {
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  return std::nullopt;
}

std::string RunConfig::get_string(std::string_view key, std::string_view fallback) const {
  auto v = get(key);
  return v ? *v : std::string(fallback);
}

double RunConfig::get_double(std::string_view key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    const double d = std::stod(*v, &used);
    if (used != v->size() || !std::isfinite(d)) bad_value(key, *v, "a finite number");
    return d;
  } catch (const std::logic_error&) {
    bad_value(key, *v, "a finite number");
  }
}

std::int64_t RunConfig::get_int(std::string_view key, std::int64_t fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) bad_value(key, *v, "an integer");
  return out;
}

std::uint64_t RunConfig::get_u64(std::string_view key, std::uint64_t fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) bad_value(key, *v, "an unsigned integer");
  return out;
}

bool RunConfig::get_bool(std::string_view key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  if (*v == "1" || *v == "true" || *v == "yes" || *v == "on") return true;
  if (*v == "0" || *v == "false" || *v == "no" || *v == "off") return false;
  bad_value(key, *v, "a boolean");
}

}  // namespace cgsc
