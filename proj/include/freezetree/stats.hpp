#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace freezetree {

// (1/2) sum |p - q| over the union of the supports.
double tv_distance(const std::map<std::string, double>& p, const std::map<std::string, double>& q);
double tv_distance(std::span<const double> p, std::span<const double> q);

// Converts counts to frequencies.
std::map<std::string, double> normalize(const std::map<std::string, std::int64_t>& counts);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::vector<std::string> cells;  // after pooling
  std::vector<std::int64_t> observed;
  std::vector<double> expected;    // counts
};

// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi_square_sf(double statistic, int dof);

// Goodness of fit of integer-valued observations against pmf(0), pmf(1), ...
// Cells are pooled from the tail so that each has expected count >= min_expected;
// the last cell collects everything beyond. Throws PreconditionError when
// fewer than two cells survive pooling.
ChiSquareResult chi_square_gof(std::span<const std::int64_t> counts_by_value, std::span<const double> pmf,
                               double min_expected = 5.0);

// Two-sample test of homogeneity between two histograms over 0, 1, 2, ...
// with adjacent cells merged until each pooled expected count is >= min_expected.
ChiSquareResult chi_square_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                      double min_expected = 5.0);

struct DistComparison {
  std::vector<std::string> support;
  std::vector<std::int64_t> observed;
  std::vector<double> expected;  // probabilities
  std::string kind;              // "chi-square" or "total-variation"
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;

  nlohmann::json to_json() const;
};

// Compares empirical counts with exact probabilities by total variation.
DistComparison compare_tv(const std::map<std::string, std::int64_t>& observed,
                          const std::map<std::string, double>& expected, double threshold);

struct Summary {
  std::int64_t count = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  double min = 0.0;
  double max = 0.0;

  nlohmann::json to_json() const;
};

Summary summarize(std::span<const double> values);

// Fraction of values satisfying lo <= v <= hi.
double fraction_within(std::span<const double> values, double lo, double hi);

}  // namespace freezetree
