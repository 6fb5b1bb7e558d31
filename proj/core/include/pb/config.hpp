#pragma once

#include <map>
#include <string>
#include <vector>

namespace pb {

/// Minimal INI-style config: [section] headers, key = value lines, '#' or ';'
/// comments. Repeated keys accumulate in order (used for structure-constant
/// and action-tensor triplet lists). Keys before any header land in "".
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  /// Single value; throws SchemaError if absent or repeated.
  const std::string& get(const std::string& section,
                         const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  /// All values for a repeated key, in file order (possibly empty).
  std::vector<std::string> get_all(const std::string& section,
                                   const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  long get_int(const std::string& section, const std::string& key,
               long fallback) const;
  /// Whitespace-separated doubles from a single value.
  std::vector<double> get_doubles(const std::string& section,
                                  const std::string& key) const;
  std::vector<std::string> sections() const;

 private:
  // section -> key -> values in file order
  std::map<std::string, std::map<std::string, std::vector<std::string>>> data_;
};

/// Whitespace-split tokens of a value string.
std::vector<std::string> split_tokens(const std::string& s);

}  // namespace pb
