#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cgsc {

/// Flat key=value configuration. Lines are `key = value`; `#` starts a
/// comment; blank lines are ignored. Unknown keys are rejected. Later
/// assignments replace earlier ones, so loading a file and then applying
/// command-line overrides gives "last one wins".
class RunConfig {
 public:
  static const std::vector<std::string_view>& known_keys();

  void load_file(const std::filesystem::path& path);
  void set(std::string_view key, std::string_view value);
  /// Parses "key=value".
  void apply_override(std::string_view assignment);

  bool has(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;

  std::string get_string(std::string_view key, std::string_view fallback) const;
  double get_double(std::string_view key, double fallback) const;
  std::int64_t get_int(std::string_view key, std::int64_t fallback) const;
  std::uint64_t get_u64(std::string_view key, std::uint64_t fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return values_; }

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace cgsc
