#pragma once

#include <complex>
#include <string>
#include <vector>

namespace rgn {

// Constellation as weighted complex points. Only second/fourth moments matter
// to the model; they enter through the excess kurtosis Phi.
struct Constellation {
  std::string name;
  std::vector<std::complex<double>> points;
  std::vector<double> probabilities;  // same length as points, sums to 1
  bool gaussian = false;              // analytic tag, Phi = 0 with no point set
};

// Phi = E|x|^4 / (E|x|^2)^2 - 2. Zero for circular Gaussian.
double excess_kurtosis(const Constellation& c);

// Built-ins: "gaussian", "qpsk", "16qam", "64qam", "256qam".
Constellation make_constellation(const std::string& tag);

// Uniform square QAM with the given points-per-side (2 -> QPSK, 8 -> 64QAM).
Constellation make_square_qam(int side);

}  // namespace rgn
