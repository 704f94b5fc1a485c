#pragma once

// Execution helpers for the data-parallel kernels. Every parallel kernel in
// the library has a serial counterpart selected with Execution::serial; the
// serial path is the reference the tests compare against.

#include <cstddef>
#include <exception>
#include <vector>

namespace spellvar {

enum class Execution { serial, parallel };

int max_threads();
void set_threads(int n);

// Calls fn(i) for i in [0, n). Under Execution::parallel the iterations are
// spread over OpenMP threads; fn must only write to per-index state.
// An exception thrown by any iteration is rethrown after the loop (the one
// from the lowest index wins, so failures are reported deterministically).
template <class Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
  if (exec == Execution::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Fixed block decomposition used for reductions. The block boundaries depend
// only on n (never on the thread count), and partial results are combined in
// block order, so reductions are bit-identical for any schedule.
inline constexpr std::size_t kReductionBlocks = 16;

struct BlockRange {
  std::size_t begin;
  std::size_t end;
};

inline std::vector<BlockRange> reduction_blocks(std::size_t n) {
  const std::size_t blocks = n < kReductionBlocks ? n : kReductionBlocks;
  std::vector<BlockRange> out;
  out.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    out.push_back({n * b / blocks, n * (b + 1) / blocks});
  }
  return out;
}

}  // namespace spellvar
