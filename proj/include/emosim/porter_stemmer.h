#pragma once

#include <string>
#include <string_view>

namespace emosim {

// One pass of the original (1980) Porter suffix-stripping algorithm.
// Expects a lowercase ASCII word; words of length <= 2 come back unchanged.
std::string PorterStem(std::string_view word);

}  // namespace emosim
