#include "fpaft/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "fpaft/error.hpp"

namespace fpaft {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
bool parse_number(const std::string& text, T& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::istringstream in(text);
  std::string raw;
  for (int line = 1; std::getline(in, raw); ++line) {
    const auto hash = raw.find('#');
    const std::string body = trim(std::string_view(raw).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw DataError(fmt::format("{}:{}: expected 'key = value'", source, line));
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) throw DataError(fmt::format("{}:{}: empty key", source, line));
    if (cfg.entries_.count(key))
      throw DataError(fmt::format("{}:{}: duplicate key '{}' (first set on line {})", source, line,
                                  key, cfg.entries_[key].line));
    cfg.entries_[key] = {trim(std::string_view(body).substr(eq + 1)), line};
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open config file '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

const Config::Entry& Config::entry(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw DataError(fmt::format("{}: missing required key '{}'", source_, key));
  return it->second;
}

void Config::fail(const std::string& key, const std::string& what) const {
  throw DataError(fmt::format("{}:{}: key '{}': {}", source_, entry(key).line, key, what));
}

std::string Config::get_string(const std::string& key) const { return entry(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  double v = 0.0;
  if (!parse_number(entry(key).value, v)) fail(key, fmt::format("'{}' is not a number", entry(key).value));
  return v;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(const std::string& key) const {
  long long v = 0;
  if (!parse_number(entry(key).value, v)) fail(key, fmt::format("'{}' is not an integer", entry(key).value));
  return v;
}

long long Config::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_uint64(const std::string& key) const {
  std::uint64_t v = 0;
  if (!parse_number(entry(key).value, v))
    fail(key, fmt::format("'{}' is not a non-negative integer", entry(key).value));
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& v = entry(key).value;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(key, fmt::format("'{}' is not a boolean", v));
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  std::vector<std::string> out;
  std::string_view rest = entry(key).value;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string item = trim(rest.substr(0, comma));
    if (item.empty()) fail(key, "empty list item");
    out.push_back(item);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : get_list(key)) {
    double v = 0.0;
    if (!parse_number(item, v)) fail(key, fmt::format("'{}' is not a number", item));
    out.push_back(v);
  }
  return out;
}

void Config::require_known(const std::set<std::string>& known) const {
  for (const auto& [k, e] : entries_)
    if (!known.count(k)) throw DataError(fmt::format("{}:{}: unknown key '{}'", source_, e.line, k));
}

}  // namespace fpaft
