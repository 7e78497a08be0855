#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <thread>
#include <vector>

namespace warphyp {

/// out[i] = fn(i) for i < count, computed on up to `threads` workers (0 means
/// hardware concurrency). Results land by index, so scheduling never changes
/// the output. The first exception (lowest chunk) is rethrown.
template <class R, class Fn>
std::vector<R> parallel_map(std::size_t count, Fn&& fn, unsigned threads = 0) {
  std::vector<R> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::future<void>> jobs;
  for (std::size_t begin = 0; begin < count; begin += chunk) {
    const std::size_t end = std::min(count, begin + chunk);
    jobs.push_back(std::async(std::launch::async, [&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
    }));
  }
  for (auto& j : jobs) j.wait();
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace warphyp
