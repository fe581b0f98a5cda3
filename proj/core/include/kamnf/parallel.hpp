#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace kamnf {

// Worker cap; 0 means hardware concurrency. Results never depend on it.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(begin, end, chunk) over fixed-size chunks of [0, n).
// Chunk boundaries depend only on n and chunk_size.
void for_chunks(std::size_t n, std::size_t chunk_size,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
  return (n + chunk_size - 1) / chunk_size;
}

// Maps each chunk to a vector and concatenates in chunk order.
template <class T, class Fn>
std::vector<T> map_chunks(std::size_t n, std::size_t chunk_size, Fn fn) {
  std::vector<std::vector<T>> parts(chunk_count(n, chunk_size));
  for_chunks(n, chunk_size, [&](std::size_t b, std::size_t e, std::size_t c) { parts[c] = fn(b, e); });
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<T> out;
  out.reserve(total);
  for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  return out;
}

}  // namespace kamnf
