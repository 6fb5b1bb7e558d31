#include "pb/config.hpp"

#include <fstream>
#include <sstream>

#include "pb/errors.hpp"

namespace pb {

namespace {
std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t cmt = line.find_first_of("#;");
    if (cmt != std::string::npos) line.erase(cmt);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw SchemaError("config line " + std::to_string(lineno) +
                          ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      cfg.data_[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw SchemaError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw SchemaError("config line " + std::to_string(lineno) +
                        ": empty key");
    cfg.data_[section][key].push_back(value);
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SchemaError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto s = data_.find(section);
  return s != data_.end() && s->second.count(key) > 0;
}

const std::string& Config::get(const std::string& section,
                               const std::string& key) const {
  auto s = data_.find(section);
  if (s == data_.end())
    throw SchemaError("config: no section [" + section + "]");
  auto k = s->second.find(key);
  if (k == s->second.end())
    throw SchemaError("config: missing key '" + key + "' in [" + section +
                      "]");
  if (k->second.size() != 1)
    throw SchemaError("config: key '" + key + "' repeated in [" + section +
                      "]");
  return k->second.front();
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

std::vector<std::string> Config::get_all(const std::string& section,
                                         const std::string& key) const {
  auto s = data_.find(section);
  if (s == data_.end()) return {};
  auto k = s->second.find(key);
  if (k == s->second.end()) return {};
  return k->second;
}

double Config::get_double(const std::string& section,
                          const std::string& key) const {
  const std::string& v = get(section, key);
  std::size_t pos = 0;
  double x = std::stod(v, &pos);
  if (!trim(v.substr(pos)).empty())
    throw SchemaError("config: key '" + key + "' is not a number: " + v);
  return x;
}

int Config::get_int(const std::string& section, const std::string& key) const {
  const std::string& v = get(section, key);
  std::size_t pos = 0;
  int x = std::stoi(v, &pos);
  if (!trim(v.substr(pos)).empty())
    throw SchemaError("config: key '" + key + "' is not an integer: " + v);
  return x;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key,
                     long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<double> Config::get_doubles(const std::string& section,
                                        const std::string& key) const {
  std::vector<double> out;
  for (const auto& t : split_tokens(get(section, key))) {
    std::size_t pos = 0;
    out.push_back(std::stod(t, &pos));
    if (pos != t.size())
      throw SchemaError("config: key '" + key + "' has a non-number: " + t);
  }
  return out;
}

std::vector<std::string> Config::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : data_) out.push_back(name);
  return out;
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

}  // namespace pb
