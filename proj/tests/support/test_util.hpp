#pragma once

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace testutil {

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    const auto base = std::filesystem::temp_directory_path();
    path_ = base / ("seedmap_test_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Independent Student-t oracle: composite-Simpson quadrature of the t
/// density on [0, |t|], p = 1 - 2 * integral. Shares no code with the
/// incomplete-beta path under test.
inline double t_two_tailed_p_quadrature(double t, int df) {
  const double at = std::fabs(t);
  if (at == 0.0) return 1.0;
  const double nu = static_cast<double>(df);
  const double log_norm = std::lgamma((nu + 1.0) / 2.0) -
                          std::lgamma(nu / 2.0) -
                          0.5 * std::log(nu * 3.14159265358979323846);
  auto pdf = [&](double u) {
    return std::exp(log_norm - (nu + 1.0) / 2.0 * std::log1p(u * u / nu));
  };
  const int n = 200000;  // even
  const double h = at / n;
  double sum = pdf(0.0) + pdf(at);
  for (int i = 1; i < n; ++i) {
    sum += pdf(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  const double integral = sum * h / 3.0;
  const double p = 1.0 - 2.0 * integral;
  return p < 0.0 ? 0.0 : p;
}

}  // namespace testutil
