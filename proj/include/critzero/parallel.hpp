#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace critzero {

/// Runs fn(i) for every i in [0, count) on `shards` worker threads; shard s
/// takes the items i with i % shards == s. The first exception thrown by any
/// worker is rethrown after all workers have joined.
template <class Fn>
void for_each_sharded(std::size_t count, std::size_t shards, Fn&& fn) {
  if (shards <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(shards);
  {
    std::vector<std::jthread> workers;
    workers.reserve(shards);
    for (std::size_t s = 0; s < shards; ++s) {
      workers.emplace_back([&, s] {
        try {
          for (std::size_t i = s; i < count; i += shards) fn(i);
        } catch (...) {
          errors[s] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace critzero
