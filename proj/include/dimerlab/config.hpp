#pragma once
#include <map>
#include <string>
#include <vector>

#include "dimerlab/errors.hpp"

namespace dimerlab {

// Key-value configuration with [section] headers, '#' comments, and
// 'key = value' lines.  Values keep their raw text; typed getters parse on
// demand and throw config_error with the offending location.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;

  std::string get_str(const std::string& section, const std::string& key) const;
  std::string get_str(const std::string& section, const std::string& key,
                      const std::string& fallback) const;
  double get_num(const std::string& section, const std::string& key) const;
  double get_num(const std::string& section, const std::string& key,
                 double fallback) const;
  long get_int(const std::string& section, const std::string& key) const;
  long get_int(const std::string& section, const std::string& key,
               long fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  // Comma-separated numeric list.
  std::vector<double> get_list(const std::string& section,
                               const std::string& key) const;
  std::vector<double> get_list(const std::string& section,
                               const std::string& key,
                               const std::vector<double>& fallback) const;

  const std::map<std::string, std::map<std::string, std::string>>& sections()
      const {
    return data_;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
  std::string origin_;
};

}  // namespace dimerlab
