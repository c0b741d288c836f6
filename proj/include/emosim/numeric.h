#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace emosim {

// Floating-point accumulator whose result is the correctly rounded value of
// the exact sum of everything added (Shewchuk partials with a half-even
// final correction). The result does not depend on the order of Add calls.
class ExactSum {
 public:
  void Add(double x);
  double Value() const;
  void Clear() { partials_.clear(); }

 private:
  std::vector<double> partials_;
};

// Componentwise ExactSum over fixed-length vectors.
class VectorAccumulator {
 public:
  explicit VectorAccumulator(std::size_t dimension) : sums_(dimension) {}

  void Add(std::span<const double> v);
  std::size_t dimension() const { return sums_.size(); }
  std::size_t count() const { return count_; }
  // Mean of everything added. Requires count() > 0.
  std::vector<double> Mean() const;

 private:
  std::vector<ExactSum> sums_;
  std::size_t count_ = 0;
};

double Dot(std::span<const double> a, std::span<const double> b);
double Norm(std::span<const double> v);

}  // namespace emosim
