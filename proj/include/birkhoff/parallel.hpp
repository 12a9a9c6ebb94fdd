#pragma once

// Index-parallel map used by the grid, per-index and per-family loops.
// Output order follows the index, so results do not depend on the thread
// count. The serial path is the reference the tests compare against.

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

namespace birkhoff {

enum class Execution { serial, parallel };

/// Set the OpenMP team size; n <= 0 restores the runtime default.
void set_threads(int n);
int max_threads();

template <class F>
auto parallel_map(std::size_t count, F&& f, Execution exec = Execution::parallel)
    -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> out(count);
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(count);
  const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    try {
      out[i] = f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  // rethrow the lowest-index failure so the reported error is deterministic
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace birkhoff
