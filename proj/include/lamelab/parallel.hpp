#ifndef LAMELAB_PARALLEL_HPP
#define LAMELAB_PARALLEL_HPP

#include <future>
#include <vector>

namespace lamelab {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
// written into per-index slots by the caller; exceptions propagate from the
// first failing task.
template <typename Fn>
void parallel_for_index(int count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> futures;
  std::atomic<int> next{0};
  int workers = std::min(threads, count);
  futures.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    }));
  }
  for (auto& f : futures) f.get();
}

}  // namespace lamelab

#endif
