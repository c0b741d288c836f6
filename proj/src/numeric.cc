#include "emosim/numeric.h"

#include <cassert>
#include <cmath>
#include <utility>

namespace emosim {

void ExactSum::Add(double x) {
  std::size_t i = 0;
  for (double y : partials_) {
    if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
    const double hi = x + y;
    const double lo = y - (hi - x);
    if (lo != 0.0) partials_[i++] = lo;
    x = hi;
  }
  partials_.resize(i);
  partials_.push_back(x);
}

double ExactSum::Value() const {
  std::size_t n = partials_.size();
  if (n == 0) return 0.0;
  double hi = partials_[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials_[--n];
    hi = x + y;
    const double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  // Round half to even when the remaining partials push past the midpoint.
  if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) ||
                (lo > 0.0 && partials_[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    const double yr = x - hi;
    if (y == yr) hi = x;
  }
  return hi;
}

void VectorAccumulator::Add(std::span<const double> v) {
  assert(v.size() == sums_.size());
  for (std::size_t i = 0; i < v.size(); ++i) sums_[i].Add(v[i]);
  ++count_;
}

std::vector<double> VectorAccumulator::Mean() const {
  assert(count_ > 0);
  std::vector<double> out(sums_.size());
  const double p = static_cast<double>(count_);
  for (std::size_t i = 0; i < sums_.size(); ++i) out[i] = sums_[i].Value() / p;
  return out;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  ExactSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.Add(a[i] * b[i]);
  return s.Value();
}

double Norm(std::span<const double> v) { return std::sqrt(Dot(v, v)); }

}  // namespace emosim
