#pragma once

#include <cstddef>
#include <vector>

namespace mlcf::detail {

// Calls emit(labels) for every assignment of `pool` entries to `positions`
// slots, in odometer order with the first slot varying fastest.
template <class T, class F>
void for_each_labeling(std::size_t positions, const std::vector<T>& pool, F emit) {
  if (positions > 0 && pool.empty()) return;
  std::vector<std::size_t> idx(positions, 0);
  std::vector<T> labels(positions);
  while (true) {
    for (std::size_t i = 0; i < positions; ++i) labels[i] = pool[idx[i]];
    emit(labels);
    std::size_t i = 0;
    for (; i < positions; ++i) {
      if (++idx[i] < pool.size()) break;
      idx[i] = 0;
    }
    if (i == positions) return;
  }
}

}  // namespace mlcf::detail
