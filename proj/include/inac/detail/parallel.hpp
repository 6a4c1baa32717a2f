#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace inac {

template <typename Partial, typename Fn>
Partial parallel_trials(std::uint64_t trials, unsigned workers, Fn&& block) {
  workers = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(resolve_workers(workers), trials)));
  std::vector<Partial> parts(workers);
  if (workers == 1) {
    parts[0] = block(std::uint64_t{0}, trials);
    return parts[0];
  }
  std::vector<std::exception_ptr> errs(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = trials * w / workers;
    const std::uint64_t end = trials * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        parts[w] = block(begin, end);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  Partial total = parts[0];
  for (unsigned w = 1; w < workers; ++w) total += parts[w];
  return total;
}

}  // namespace inac
