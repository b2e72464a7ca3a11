#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sgc {

/// Flat view of an INI file: "section.key" -> value. Keys outside any
/// section are stored without a prefix.
class Config {
 public:
  static Config load(const std::string& path);
  static Config parse(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get(const std::string& key) const;  // throws if absent
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  std::uint64_t get_seed() const;  // "experiment.seed", mandatory
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated list, entries trimmed.
  std::vector<std::string> get_list(const std::string& key, const std::vector<std::string>& fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  /// "# config: k=v; k=v" with keys sorted.
  std::string echo() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace sgc
