#pragma once

#include <cstdint>
#include <vector>

namespace rsn {

struct Accumulator {
  std::int64_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double v) {
    ++count;
    sum += v;
    sum_sq += v * v;
  }
  void merge(const Accumulator& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const;
  double variance() const;  // unbiased
  double standard_error() const;
};

// Two-sample Kolmogorov-Smirnov distance sup |F_a - F_b|.
double ks_distance(std::vector<double> a, std::vector<double> b);
// Asymptotic critical value of the two-sample distance at the given confidence level.
double ks_critical(double confidence, std::size_t n, std::size_t m);

double correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace rsn
