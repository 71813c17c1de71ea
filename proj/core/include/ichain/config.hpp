#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ichain {

/// Config syntax error with file/line context. Maps to CLI exit code 2.
struct ConfigParseError : std::runtime_error {
  ConfigParseError(const std::string& file, int line, const std::string& message);
  std::string file;
  int line;
};

/**
 * @brief Flat key/value configuration with [section] headers.
 *
 * Grammar: '#' or ';' starts a comment; sections are [name] (dots allowed
 * for nested blocks, e.g. [signal.1]); entries are `key = value`; list
 * values are whitespace-separated. Keys are unique per section.
 */
class ConfigFile {
 public:
  static ConfigFile load(const std::string& path);
  static ConfigFile parse(const std::string& text, const std::string& name = "<string>");

  bool has_section(const std::string& section) const;
  bool has_key(const std::string& section, const std::string& key) const;
  std::vector<std::string> section_names() const;

  // Typed getters; the non-optional forms throw std::invalid_argument with
  // section/key context when the entry is missing or malformed.
  std::string get_string(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key) const;
  std::uint64_t get_uint64(const std::string& section, const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key) const;
  std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  int get_int_or(const std::string& section, const std::string& key, int fallback) const;
  std::uint64_t get_uint64_or(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;

  const std::string& name() const { return name_; }

 private:
  std::optional<std::string> find(const std::string& section, const std::string& key) const;
  [[noreturn]] void missing(const std::string& section, const std::string& key) const;

  std::string name_;
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace ichain
