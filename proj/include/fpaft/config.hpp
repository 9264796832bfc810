#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fpaft {

/// `key = value` configuration with `#` comments and blank lines.
///
/// Lists are comma separated. Every error names the source, line and key it concerns.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::string& source() const { return source_; }
  std::vector<std::string> keys() const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_uint64(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;

  /// Throws DataError on the first key not in `known`.
  void require_known(const std::set<std::string>& known) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  const Entry& entry(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  std::map<std::string, Entry> entries_;
  std::string source_;
};

}  // namespace fpaft
