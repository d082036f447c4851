#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <vector>

namespace sobnet {

/// Execution path for per-node kernels. `serial` is the reference
/// implementation; `parallel` splits nodes across OpenMP threads. Both write
/// the same per-node values and reduce them in the same fixed order, so their
/// results are bit-identical.
enum class Exec { serial, parallel };

/// Pairwise (cascade) summation in fixed left-to-right tree order.
double pairwise_sum(std::span<const double> values) noexcept;

/// Calls fn(i) for every i < count; fn must only write to slots owned by i.
/// Exceptions thrown by fn are rethrown after the loop; with several failing
/// nodes the lowest index wins, so the error is the same on both paths.
template <class Fn>
void for_each_node(std::size_t count, Exec exec, Fn&& fn) {
  std::exception_ptr first;
  std::size_t first_index = count;
  std::mutex guard;
  auto run = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard lock(guard);
      if (i < first_index) {
        first_index = i;
        first = std::current_exception();
      }
    }
  };
  if (exec == Exec::parallel) {
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < count; ++i) run(i);
  }
  if (first) std::rethrow_exception(first);
}

/// Number of OpenMP threads used by the parallel path.
int max_threads() noexcept;
void set_threads(int n) noexcept;

}  // namespace sobnet
