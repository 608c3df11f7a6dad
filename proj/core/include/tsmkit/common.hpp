#pragma once

// Shared numeric types, error classes and the deterministic parallel reducer.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace tsmkit {

using cplx = std::complex<double>;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Residual tolerances for exact arithmetic chains and for spectral work.
inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kSpectralTol = 1e-10;
/// Coefficients with modulus at or below this are dropped from sparse forms.
inline constexpr double kPruneTol = 1e-15;

class DimensionError : public std::invalid_argument {
 public:
  DimensionError(const std::string& what, int index)
      : std::invalid_argument(what), index_(index) {}
  /// Position of the offending item, or -1 when no single item is to blame.
  int index() const noexcept { return index_; }

 private:
  int index_;
};

class DegenerateFormError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, CVec node)
      : std::runtime_error(what), node_(std::move(node)) {}
  const CVec& node() const noexcept { return node_; }

 private:
  CVec node_;
};

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// x = (x_1..x_n, y_1..y_n)  <->  z = (x_1 + i y_1, ..., x_n + i y_n).
RVec realify(const CVec& z);
CVec complexify(const RVec& x);

/// Worker count: TSMKIT_THREADS when set and positive, else hardware concurrency.
int thread_count();

namespace detail {

inline constexpr std::size_t kReduceBlock = 2048;

template <class T>
T pairwise(std::vector<T>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return T{};
  if (hi - lo == 1) return v[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise(v, lo, mid) + pairwise(v, mid, hi);
}

}  // namespace detail

/// Sum term(0) + ... + term(count-1) with a summation tree that depends only on
/// `count`: fixed-size blocks are summed pairwise, then the block sums are
/// summed pairwise. Blocks are spread over threads, so serial and parallel runs
/// give identical bits.
template <class T, class F>
T deterministic_sum(std::size_t count, F&& term) {
  if (count == 0) return T{};
  const std::size_t nblocks = (count + detail::kReduceBlock - 1) / detail::kReduceBlock;
  std::vector<T> block_sums(nblocks);

  auto run_blocks = [&](std::size_t b0, std::size_t b1) {
    std::vector<T> buf;
    buf.reserve(detail::kReduceBlock);
    for (std::size_t b = b0; b < b1; ++b) {
      buf.clear();
      const std::size_t lo = b * detail::kReduceBlock;
      const std::size_t hi = std::min(count, lo + detail::kReduceBlock);
      for (std::size_t i = lo; i < hi; ++i) buf.push_back(term(i));
      block_sums[b] = detail::pairwise(buf, 0, buf.size());
    }
  };

  const int workers = std::min<int>(thread_count(), static_cast<int>(nblocks));
  if (workers <= 1) {
    run_blocks(0, nblocks);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const std::size_t per = (nblocks + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::size_t b0 = w * per;
      const std::size_t b1 = std::min(nblocks, b0 + per);
      if (b0 >= b1) break;
      pool.emplace_back([&, b0, b1] {
        try {
          run_blocks(b0, b1);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  return detail::pairwise(block_sums, 0, block_sums.size());
}

}  // namespace tsmkit
