#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "rsn/filling.hpp"
#include "rsn/hdiagram.hpp"

namespace rsn {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

constexpr int kMaxEnumerationOrder = 6;
constexpr int kMaxExactOrder = 40;

// Visits every standard filling of T(0,n) as a rank-ordered cell list. Depth-first
// with an explicit stack. Throws BudgetError above order 6.
void for_each_filling(int order, const std::function<void(const std::vector<Cell>&)>& visit);
std::uint64_t count_fillings(int order);
std::vector<StandardFilling> enumerate_fillings(int order);

// Every downward-closed subset of a small staircase.
std::vector<GrowthState> enumerate_states(const Shape& shape);

BigInt exact_tableau_count(const GrowthState& state);
BigInt exact_tableau_count(const Shape& shape);
// d(B \ z) / d(B) by exact counts.
Rational exact_corner_weight(const GrowthState& state, Cell z);

struct ExactOutcome {
  std::string label;
  std::uint64_t digest;
  Rational probability;
};

struct ExactDistribution {
  std::vector<ExactOutcome> outcomes;
  Rational total() const;
};

// Law of the first swap of T(0,n) over bottom-row cells, left to right.
ExactDistribution exact_first_swap_distribution(int order);
std::string to_csv(const ExactDistribution& d);

struct ChiSquare {
  double statistic;
  int dof;
};

// Pearson statistic of observed counts against probabilities. Cells whose expected
// count falls below min_expected are pooled before the statistic is formed.
ChiSquare chi_square(const std::vector<std::int64_t>& observed, const std::vector<double>& probabilities,
                     double min_expected = 5.0);
double chi_square_quantile(double p, int dof);

// Hook length by walking the two down-diagonals of z against an explicit member set.
int brute_hook_length(const Shape& shape, const std::unordered_set<Cell, CellHash>& members, Cell z);
int brute_hook_length(const GrowthState& state, Cell z);

std::uint64_t fnv1a(const std::string& bytes);
std::uint64_t digest(const std::vector<int>& values);

}  // namespace rsn
