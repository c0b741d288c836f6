#pragma once

#include <span>
#include <vector>

namespace emosim {

enum class RankOrder { kAscending, kDescending };

// 1-based fractional ranks; tied values share the mean of the ranks they
// span (scores [0.9, 0.5, 0.5, 0.1] descending -> [1, 2.5, 2.5, 4]).
std::vector<double> FractionalRanks(std::span<const double> values,
                                    RankOrder order = RankOrder::kAscending);

}  // namespace emosim
