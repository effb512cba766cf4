#include "dimerlab/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace dimerlab {

namespace {
constexpr char kMagic[4] = {'D', 'L', 'C', 'K'};
constexpr uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& f, const T& v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}
}  // namespace

void save_state(const std::string& path, const ModelParams& p, double t,
                const Matrix& rho) {
  validate(p);
  if (rho.rows() != p.N + 1 || rho.cols() != p.N + 1)
    throw std::invalid_argument("save_state: dimension mismatch");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("save_state: cannot open " + path);
  f.write(kMagic, 4);
  put(f, kVersion);
  put(f, uint32_t(p.N));
  put(f, p.u);
  put(f, p.g);
  put(f, t);
  const int dim = p.N + 1;
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) {
      put(f, rho(n, m).real());
      put(f, rho(n, m).imag());
    }
  if (!f) throw io_error("save_state: write failure on " + path);
}

Checkpoint load_state(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("load_state: cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, kMagic, 4) != 0)
    throw io_error("load_state: bad magic in " + path);
  const auto version = take<uint32_t>(f);
  if (version != kVersion)
    throw io_error("load_state: unsupported version " + std::to_string(version));
  Checkpoint c;
  c.params.N = int(take<uint32_t>(f));
  c.params.u = take<double>(f);
  c.params.g = take<double>(f);
  c.t = take<double>(f);
  validate(c.params);
  const int dim = c.params.N + 1;
  c.rho.resize(dim, dim);
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) {
      const double re = take<double>(f);
      const double im = take<double>(f);
      c.rho(n, m) = cxd(re, im);
    }
  if (!f) throw io_error("load_state: truncated file " + path);
  return c;
}

Checkpoint load_state(const std::string& path, const ModelParams& expect) {
  Checkpoint c = load_state(path);
  if (c.params.N != expect.N || c.params.u != expect.u ||
      c.params.g != expect.g)
    throw config_error("load_state: checkpoint parameters mismatch resume");
  return c;
}

}  // namespace dimerlab
