#pragma once

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace xiprime {

// Number of worker threads used by the parallel helpers. Zero means
// std::thread::hardware_concurrency().
void set_worker_count(unsigned n);
unsigned worker_count();

// Runs fn(block) for every block in [0, n_blocks). Blocks are claimed from a
// shared counter, so scheduling is dynamic, but callers write results into a
// per-block slot and combine them in block order afterwards; the outcome is
// therefore independent of the thread count. The first exception thrown by
// any block is rethrown on the calling thread.
template <class Fn>
void parallel_blocks(std::size_t n_blocks, Fn&& fn) {
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(worker_count(), n_blocks));
  if (n_threads <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        fn(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_blocks);
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (unsigned i = 0; i < n_threads; ++i) threads.emplace_back(worker);
  for (auto& th : threads) th.join();
  if (failure) std::rethrow_exception(failure);
}

// Neumaier-compensated accumulator. Used wherever long sums must be stable
// and bit-reproducible.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

template <class T>
class CompensatedSum<std::complex<T>> {
 public:
  void add(std::complex<T> x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  std::complex<T> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<T> re_;
  CompensatedSum<T> im_;
};

}  // namespace xiprime
