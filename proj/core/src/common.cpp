#include "tsmkit/common.hpp"

#include <cstdlib>

namespace tsmkit {

RVec realify(const CVec& z) {
  const Eigen::Index n = z.size();
  RVec x(2 * n);
  for (Eigen::Index l = 0; l < n; ++l) {
    x[l] = z[l].real();
    x[n + l] = z[l].imag();
  }
  return x;
}

CVec complexify(const RVec& x) {
  if (x.size() % 2 != 0) throw DimensionError("complexify: odd-length real vector", -1);
  const Eigen::Index n = x.size() / 2;
  CVec z(n);
  for (Eigen::Index l = 0; l < n; ++l) z[l] = cplx(x[l], x[n + l]);
  return z;
}

int thread_count() {
  if (const char* env = std::getenv("TSMKIT_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace tsmkit
