#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace netsync {

/// Sectioned key = value configuration:
///
///   # comment
///   [extended_rseb]
///   r_max = 20
///   n_agents = [200, 400, 600, 800]
///   mode = "extended"
///
/// Keys before the first header belong to the "" section. Values are kept as
/// text and converted on access.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;
  std::vector<std::string> sections() const;

  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                  const std::vector<double>& fallback) const;
  std::vector<std::int64_t> get_ints(const std::string& section, const std::string& key,
                                     const std::vector<std::int64_t>& fallback) const;
  std::vector<std::string> get_strings(const std::string& section, const std::string& key,
                                       const std::vector<std::string>& fallback) const;

  void set(const std::string& section, const std::string& key, const std::string& raw_value);
  const std::map<std::string, std::string>& section(const std::string& name) const;
  /// Canonical text form (sorted sections and keys).
  std::string dump() const;

 private:
  std::optional<std::string> raw(const std::string& section, const std::string& key) const;
  std::map<std::string, std::map<std::string, std::string>> data_;
};

}  // namespace netsync
