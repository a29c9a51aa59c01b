#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace indep::detail {

inline unsigned resolve_threads(unsigned requested, std::uint64_t work) {
  unsigned threads = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(work, 1)));
}

/// Runs body(index, state) for index in [0, count), spreading indices over
/// worker threads in chunks. Each worker owns one State made by make_state();
/// the per-worker states are returned for the caller to merge. Results must
/// only depend on the index, never on which worker ran it.
template <typename State, typename MakeState, typename Body>
std::vector<State> for_each_replication(std::uint64_t count, unsigned threads,
                                        MakeState&& make_state, Body&& body) {
  const unsigned workers = resolve_threads(threads, count);
  std::vector<State> states;
  states.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) states.push_back(make_state());

  constexpr std::uint64_t chunk = 64;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto run = [&](State& state) {
    try {
      for (;;) {
        const std::uint64_t begin = next.fetch_add(chunk);
        if (begin >= count) break;
        const std::uint64_t end = std::min(count, begin + chunk);
        for (std::uint64_t i = begin; i < end; ++i) body(i, state);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(count);
    }
  };

  if (workers == 1) {
    run(states.front());
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back([&, w] { run(states[w]); });
  }
  if (failure) std::rethrow_exception(failure);
  return states;
}

}  // namespace indep::detail
