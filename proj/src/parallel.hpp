#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace bitprobe::detail {

/// Splits [0, n) into contiguous chunks and runs fn(begin, end, chunk) on
/// worker threads. Chunk c always covers the same range for a given n, so
/// callers can merge per-chunk results in chunk order deterministically.
template <class Fn>
std::size_t parallel_chunks(std::uint64_t n, Fn&& fn, std::uint64_t min_chunk = 4096) {
  const std::uint64_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t chunks = std::max<std::uint64_t>(1, std::min(hw, n / min_chunk));
  const std::uint64_t step = (n + chunks - 1) / chunks;
  if (chunks == 1) {
    fn(std::uint64_t{0}, n, std::size_t{0});
    return 1;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(chunks);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    const std::uint64_t begin = std::min(n, c * step);
    const std::uint64_t end = std::min(n, begin + step);
    workers.emplace_back([&, begin, end, c] {
      try {
        fn(begin, end, static_cast<std::size_t>(c));
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) {
    w.join();
  }
  for (auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return static_cast<std::size_t>(chunks);
}

/// Number of chunks parallel_chunks will use for n items.
inline std::size_t chunk_count(std::uint64_t n, std::uint64_t min_chunk = 4096) {
  const std::uint64_t hw = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<std::size_t>(std::max<std::uint64_t>(1, std::min(hw, n / min_chunk)));
}

}  // namespace bitprobe::detail
