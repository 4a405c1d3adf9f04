#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nshomog {

/// Sample mean with a 95% CLT half-width 1.96 s / sqrt(n).
struct Estimate {
  double estimate = 0.0;
  double half_width = 0.0;
  std::size_t count = 0;
};

/// Throws std::invalid_argument on an empty sample.
Estimate mean_estimate(std::span<const double> x);

/// Linear-interpolation quantile (type 7), q in [0, 1].
double quantile(std::vector<double> x, double q);

/// Points of a fixed dimension, stored contiguously.
class SampleSet {
 public:
  explicit SampleSet(int dim);
  static SampleSet scalars(std::span<const double> x);

  int dim() const { return dim_; }
  std::size_t size() const { return data_.size() / dim_; }
  bool empty() const { return data_.empty(); }
  void push(std::span<const double> point);
  std::span<const double> point(std::size_t i) const {
    return {data_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& data() const { return data_; }

 private:
  int dim_;
  std::vector<double> data_;
};

/// Energy distance (V-statistic, Euclidean metric):
///   2 mean|a_i - b_j| - mean|a_i - a_i'| - mean|b_j - b_j'|  (>= 0).
/// Symmetric bit for bit and exactly 0 when a and b hold the same points.
/// Throws std::invalid_argument on empty input or mismatched dimensions.
double two_sample_distance(const SampleSet& a, const SampleSet& b);
double two_sample_distance(std::span<const double> a,
                           std::span<const double> b);

struct PermutationResult {
  double distance = 0.0;
  double p_value = 1.0;
  int permutations = 0;
};

/// Permutation test of equal laws with the energy distance; the p-value is
/// (1 + #{permuted >= observed}) / (1 + permutations).
PermutationResult permutation_test(const SampleSet& a, const SampleSet& b,
                                   int permutations, std::uint64_t seed);

/// Asymptotic Kolmogorov survival function P(K > lambda).
double kolmogorov_survival(double lambda);

/// One-sample Kolmogorov-Smirnov statistic against U(0, 1).
double ks_statistic_uniform(std::vector<double> x);
/// p-value of ks_statistic_uniform with Stephens' small-n correction.
double ks_uniform_pvalue(std::vector<double> x);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace nshomog
