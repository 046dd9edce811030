#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rgn {

// Tabulated curve with strictly increasing abscissae and linear interpolation.
// Queries outside the table clamp to the end values.
class TabulatedCurve {
 public:
  TabulatedCurve() = default;
  TabulatedCurve(std::vector<double> x, std::vector<double> y, std::string what = "curve")
      : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size() || x_.size() < 2)
      throw std::invalid_argument(what + ": need >= 2 samples");
    for (size_t i = 1; i < x_.size(); ++i)
      if (!(x_[i] > x_[i - 1]))
        throw std::invalid_argument(what + ": abscissae must be strictly increasing");
  }

  double operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    size_t hi = 1;
    {
      size_t lo = 0, n = x_.size();
      // binary search for first x_[hi] > x
      size_t a = 0, b = n - 1;
      while (b - a > 1) {
        size_t m = (a + b) / 2;
        (x_[m] <= x ? a : b) = m;
      }
      lo = a;
      hi = b;
      const double t = (x - x_[lo]) / (x_[hi] - x_[lo]);
      return y_[lo] + t * (y_[hi] - y_[lo]);
    }
  }

  const std::vector<double>& xs() const { return x_; }
  const std::vector<double>& ys() const { return y_; }
  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }

 private:
  std::vector<double> x_, y_;
};

}  // namespace rgn
