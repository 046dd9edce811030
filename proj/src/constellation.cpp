#include "rgn/constellation.hpp"

#include <cmath>
#include <stdexcept>

namespace rgn {

double excess_kurtosis(const Constellation& c) {
  if (c.gaussian) return 0.0;
  if (c.points.empty()) throw std::invalid_argument("excess_kurtosis: empty constellation");
  if (c.points.size() != c.probabilities.size())
    throw std::invalid_argument("excess_kurtosis: points/probabilities size mismatch");
  double m2 = 0.0, m4 = 0.0;
  for (size_t i = 0; i < c.points.size(); ++i) {
    const double p2 = std::norm(c.points[i]);
    m2 += c.probabilities[i] * p2;
    m4 += c.probabilities[i] * p2 * p2;
  }
  if (m2 <= 0.0) throw std::invalid_argument("excess_kurtosis: degenerate constellation");
  return m4 / (m2 * m2) - 2.0;
}

Constellation make_square_qam(int side) {
  if (side < 2) throw std::invalid_argument("make_square_qam: side must be >= 2");
  Constellation c;
  c.name = std::to_string(side * side) + "qam";
  const double p = 1.0 / (side * side);
  for (int i = 0; i < side; ++i)
    for (int q = 0; q < side; ++q) {
      const double re = 2.0 * i - (side - 1);
      const double im = 2.0 * q - (side - 1);
      c.points.emplace_back(re, im);
      c.probabilities.push_back(p);
    }
  return c;
}

Constellation make_constellation(const std::string& tag) {
  if (tag == "gaussian") {
    Constellation c;
    c.name = "gaussian";
    c.gaussian = true;
    return c;
  }
  if (tag == "qpsk") {
    Constellation c = make_square_qam(2);
    c.name = "qpsk";
    return c;
  }
  if (tag == "16qam") return make_square_qam(4);
  if (tag == "64qam") return make_square_qam(8);
  if (tag == "256qam") return make_square_qam(16);
  throw std::invalid_argument("unknown constellation tag: " + tag);
}

}  // namespace rgn
