#ifndef MOODCRL_TESTS_SUPPORT_HPP_
#define MOODCRL_TESTS_SUPPORT_HPP_

#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "moodcrl/nn/param_store.hpp"

namespace moodcrl::testing {

inline Matrix random_matrix(Index rows, Index cols, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (Index k = 0; k < m.size(); ++k) m.data()[k] = normal(rng);
  return m;
}

// Overwrites every parameter with N(0, scale^2) draws.
inline void randomize(nn::ParamStore& store, Rng& rng, double scale) {
  for (auto id : store.ids()) {
    const Matrix& v = store.value(id);
    store.value(id) = random_matrix(v.rows(), v.cols(), rng, scale);
  }
}

// Central-difference Jacobian of f at x, out x in.
inline Matrix numeric_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x,
                               double h = 1e-6) {
  const Vector f0 = f(x);
  Matrix jac(f0.size(), x.size());
  Vector probe = x;
  for (Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + h;
    const Vector up = f(probe);
    probe[j] = x[j] - h;
    const Vector down = f(probe);
    probe[j] = x[j];
    jac.col(j) = (up - down) / (2.0 * h);
  }
  return jac;
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("moodcrl_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace moodcrl::testing

#endif  // MOODCRL_TESTS_SUPPORT_HPP_
