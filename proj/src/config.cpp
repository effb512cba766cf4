#include "dimerlab/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace dimerlab {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error(origin + ":" + std::to_string(lineno) +
                           ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw config_error(origin + ":" + std::to_string(lineno) +
                           ": empty section name");
      c.data_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(origin + ":" + std::to_string(lineno) +
                         ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
    c.data_[section][key] = val;
  }
  return c;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_string(ss.str(), path);
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = data_.find(section);
  return s != data_.end() && s->second.count(key) > 0;
}

std::string Config::get_str(const std::string& section,
                            const std::string& key) const {
  const auto s = data_.find(section);
  if (s == data_.end() || !s->second.count(key))
    throw config_error(origin_ + ": missing [" + section + "] " + key);
  return s->second.at(key);
}

std::string Config::get_str(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  return has(section, key) ? get_str(section, key) : fallback;
}

double Config::get_num(const std::string& section,
                       const std::string& key) const {
  const std::string v = get_str(section, key);
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (trim(v.substr(used)).size())
      throw config_error("");
    return x;
  } catch (...) {
    throw config_error(origin_ + ": [" + section + "] " + key +
                       " is not a number: '" + v + "'");
  }
}

double Config::get_num(const std::string& section, const std::string& key,
                       double fallback) const {
  return has(section, key) ? get_num(section, key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key) const {
  const double x = get_num(section, key);
  const long i = long(x);
  if (double(i) != x)
    throw config_error(origin_ + ": [" + section + "] " + key +
                       " must be an integer");
  return i;
}

long Config::get_int(const std::string& section, const std::string& key,
                     long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
  if (!has(section, key)) return fallback;
  std::string v = get_str(section, key);
  for (auto& ch : v) ch = char(std::tolower(static_cast<unsigned char>(ch)));
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw config_error(origin_ + ": [" + section + "] " + key +
                     " is not a boolean: '" + v + "'");
}

std::vector<double> Config::get_list(const std::string& section,
                                     const std::string& key) const {
  const std::string v = get_str(section, key);
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      size_t used = 0;
      const double x = std::stod(item, &used);
      if (trim(item.substr(used)).size()) throw config_error("");
      out.push_back(x);
    } catch (...) {
      throw config_error(origin_ + ": [" + section + "] " + key +
                         " has a non-numeric item: '" + item + "'");
    }
  }
  if (out.empty())
    throw config_error(origin_ + ": [" + section + "] " + key +
                       " is an empty list");
  return out;
}

std::vector<double> Config::get_list(const std::string& section,
                                     const std::string& key,
                                     const std::vector<double>& fallback) const {
  return has(section, key) ? get_list(section, key) : fallback;
}

}  // namespace dimerlab
