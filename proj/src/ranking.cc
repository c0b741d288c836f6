#include "emosim/ranking.h"

#include <algorithm>
#include <numeric>

namespace emosim {

std::vector<double> FractionalRanks(std::span<const double> values, RankOrder order) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return order == RankOrder::kAscending ? values[a] < values[b]
                                          : values[a] > values[b];
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[idx[j]] == values[idx[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[idx[k]] = shared;
    i = j;
  }
  return ranks;
}

}  // namespace emosim
