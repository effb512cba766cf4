#pragma once
#include <string>
#include <vector>

namespace dimerlab {

// Minimal self-contained SVG line plots; CSV stays the authoritative output.
class LinePlot {
 public:
  LinePlot(std::string title, std::string xlabel, std::string ylabel);
  void set_log_x(bool v) { log_x_ = v; }
  void set_log_y(bool v) { log_y_ = v; }
  void add_series(const std::string& name, const std::vector<double>& x,
                  const std::vector<double>& y, bool dashed = false);
  void write(const std::string& path) const;

 private:
  struct Series {
    std::string name;
    std::vector<double> x, y;
    bool dashed;
  };
  std::string title_, xlabel_, ylabel_;
  bool log_x_ = false, log_y_ = false;
  std::vector<Series> series_;
};

}  // namespace dimerlab
