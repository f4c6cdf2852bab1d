#include "netsync/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "netsync/errors.hpp"

namespace netsync {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Drops a trailing comment that is not inside quotes.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    else if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

std::vector<std::string> split_list(const std::string& v) {
  std::string inner = trim(v);
  if (inner.size() >= 2 && inner.front() == '[' && inner.back() == ']') inner = inner.substr(1, inner.size() - 2);
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : inner) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      out.push_back(unquote(trim(cur)));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(unquote(trim(cur)));
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw ParseError("config: " + what + ": expected a number, got '" + t + "'");
  return v;
}

std::int64_t to_int(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec == std::errc() && p == t.data() + t.size() && !t.empty()) return v;
  // Accept integral values written in floating-point form (1e5).
  const double d = to_double(t, what);
  if (d != static_cast<double>(static_cast<std::int64_t>(d)))
    throw ParseError("config: " + what + ": expected an integer, got '" + t + "'");
  return static_cast<std::int64_t>(d);
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(where + ": unterminated section header");
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      if (section.empty()) throw ParseError(where + ": empty section name");
      c.data_[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) throw ParseError(where + ": empty key");
    if (!value.empty() && value.front() == '[' && value.back() != ']')
      throw ParseError(where + ": unterminated list");
    c.data_[section][key] = (!value.empty() && value.front() == '[') ? value : unquote(value);
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

std::optional<std::string> Config::raw(const std::string& section, const std::string& key) const {
  auto s = data_.find(section);
  if (s == data_.end()) return std::nullopt;
  auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

bool Config::has(const std::string& section, const std::string& key) const { return raw(section, key).has_value(); }
bool Config::has_section(const std::string& section) const { return data_.count(section) != 0; }

std::vector<std::string> Config::sections() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : data_) out.push_back(k);
  return out;
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  return raw(section, key).value_or(fallback);
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  auto r = raw(section, key);
  return r ? to_double(*r, section + "." + key) : fallback;
}

std::int64_t Config::get_int(const std::string& section, const std::string& key, std::int64_t fallback) const {
  auto r = raw(section, key);
  return r ? to_int(*r, section + "." + key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  auto r = raw(section, key);
  if (!r) return fallback;
  if (*r == "true" || *r == "1" || *r == "yes") return true;
  if (*r == "false" || *r == "0" || *r == "no") return false;
  throw ParseError("config: " + section + "." + key + ": expected a boolean, got '" + *r + "'");
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const {
  auto r = raw(section, key);
  if (!r) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(*r)) out.push_back(to_double(item, section + "." + key));
  return out;
}

std::vector<std::int64_t> Config::get_ints(const std::string& section, const std::string& key,
                                           const std::vector<std::int64_t>& fallback) const {
  auto r = raw(section, key);
  if (!r) return fallback;
  std::vector<std::int64_t> out;
  for (const auto& item : split_list(*r)) out.push_back(to_int(item, section + "." + key));
  return out;
}

std::vector<std::string> Config::get_strings(const std::string& section, const std::string& key,
                                             const std::vector<std::string>& fallback) const {
  auto r = raw(section, key);
  return r ? split_list(*r) : fallback;
}

void Config::set(const std::string& section, const std::string& key, const std::string& raw_value) {
  data_[section][key] = raw_value;
}

const std::map<std::string, std::string>& Config::section(const std::string& name) const {
  static const std::map<std::string, std::string> empty;
  auto s = data_.find(name);
  return s == data_.end() ? empty : s->second;
}

std::string Config::dump() const {
  std::ostringstream os;
  for (const auto& [name, kv] : data_) {
    if (!name.empty()) os << '[' << name << "]\n";
    for (const auto& [k, v] : kv) {
      const bool quote = v.find('#') != std::string::npos && v.front() != '[';
      os << k << " = " << (quote ? '"' + v + '"' : v) << '\n';
    }
  }
  return os.str();
}

}  // namespace netsync
