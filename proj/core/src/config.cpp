#include "ichain/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ichain {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::string strip_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i)
    if (line[i] == '#' || line[i] == ';') return line.substr(0, i);
  return line;
}

}  // namespace

ConfigParseError::ConfigParseError(const std::string& file_in, int line_in,
                                   const std::string& message)
    : std::runtime_error(file_in + ":" + std::to_string(line_in) + ": " + message),
      file(file_in),
      line(line_in) {}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigParseError(path, 0, "cannot open config file");
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return parse(buffer.str(), path);
}

ConfigFile ConfigFile::parse(const std::string& text, const std::string& name) {
  ConfigFile cfg;
  cfg.name_ = name;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigParseError(name, line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigParseError(name, line_no, "empty section name");
      cfg.sections_[section];  // register even if empty
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigParseError(name, line_no, "expected 'key = value'");
    if (section.empty())
      throw ConfigParseError(name, line_no, "entry outside of any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigParseError(name, line_no, "empty key");
    auto& sec = cfg.sections_[section];
    if (sec.count(key))
      throw ConfigParseError(name, line_no, "duplicate key '" + key + "' in [" + section + "]");
    sec[key] = value;
  }
  return cfg;
}

bool ConfigFile::has_section(const std::string& section) const {
  return sections_.count(section) != 0;
}

bool ConfigFile::has_key(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) != 0;
}

std::vector<std::string> ConfigFile::section_names() const {
  std::vector<std::string> names;
  names.reserve(sections_.size());
  for (const auto& [name, _] : sections_) names.push_back(name);
  return names;
}

std::optional<std::string> ConfigFile::find(const std::string& section,
                                            const std::string& key) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return std::nullopt;
  auto kit = it->second.find(key);
  if (kit == it->second.end()) return std::nullopt;
  return kit->second;
}

void ConfigFile::missing(const std::string& section, const std::string& key) const {
  throw std::invalid_argument(name_ + ": missing required key '" + key + "' in [" + section +
                              "]");
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) const {
  auto v = find(section, key);
  if (!v) missing(section, key);
  return *v;
}

namespace {

double parse_double(const std::string& context, const std::string& token) {
  try {
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument(context + ": not a number: '" + token + "'");
  }
}

}  // namespace

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
  return parse_double(name_ + " [" + section + "] " + key, get_string(section, key));
}

int ConfigFile::get_int(const std::string& section, const std::string& key) const {
  const double v = get_double(section, key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw std::invalid_argument(name_ + " [" + section + "] " + key + ": expected an integer");
  return i;
}

std::uint64_t ConfigFile::get_uint64(const std::string& section, const std::string& key) const {
  const std::string token = get_string(section, key);
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(token, &used);
    if (used != token.size()) throw std::invalid_argument("trailing characters");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw std::invalid_argument(name_ + " [" + section + "] " + key +
                                ": expected an unsigned integer");
  }
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key) const {
  const std::string v = get_string(section, key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument(name_ + " [" + section + "] " + key + ": expected a boolean");
}

std::vector<double> ConfigFile::get_double_list(const std::string& section,
                                                const std::string& key) const {
  const std::string raw = get_string(section, key);
  std::istringstream is(raw);
  std::vector<double> values;
  std::string token;
  while (is >> token)
    values.push_back(parse_double(name_ + " [" + section + "] " + key, token));
  if (values.empty())
    throw std::invalid_argument(name_ + " [" + section + "] " + key + ": empty list");
  return values;
}

std::string ConfigFile::get_string_or(const std::string& section, const std::string& key,
                                      const std::string& fallback) const {
  auto v = find(section, key);
  return v ? *v : fallback;
}

double ConfigFile::get_double_or(const std::string& section, const std::string& key,
                                 double fallback) const {
  return has_key(section, key) ? get_double(section, key) : fallback;
}

int ConfigFile::get_int_or(const std::string& section, const std::string& key,
                           int fallback) const {
  return has_key(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t ConfigFile::get_uint64_or(const std::string& section, const std::string& key,
                                        std::uint64_t fallback) const {
  return has_key(section, key) ? get_uint64(section, key) : fallback;
}

bool ConfigFile::get_bool_or(const std::string& section, const std::string& key,
                             bool fallback) const {
  return has_key(section, key) ? get_bool(section, key) : fallback;
}

}  // namespace ichain
