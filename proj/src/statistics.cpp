#include "nshomog/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "nshomog/rng.hpp"

namespace nshomog {

Estimate mean_estimate(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean_estimate: empty sample");
  Estimate e;
  e.count = x.size();
  const double n = static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x) sum += v;
  e.estimate = sum / n;
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - e.estimate) * (v - e.estimate);
    e.half_width = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return e;
}

double quantile(std::vector<double> x, double q) {
  if (x.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q");
  std::sort(x.begin(), x.end());
  const double h = q * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

SampleSet::SampleSet(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("SampleSet: dim must be >= 1");
}

SampleSet SampleSet::scalars(std::span<const double> x) {
  SampleSet s(1);
  s.data_.assign(x.begin(), x.end());
  return s;
}

void SampleSet::push(std::span<const double> point) {
  if (point.size() != static_cast<std::size_t>(dim_)) {
    throw std::invalid_argument("SampleSet: point has the wrong dimension");
  }
  data_.insert(data_.end(), point.begin(), point.end());
}

namespace {

double dist(std::span<const double> x, std::span<const double> y) {
  if (x.size() == 1) return std::abs(x[0] - y[0]);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
  return std::sqrt(s);
}

double pair_sum(const SampleSet& x, const SampleSet& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) s += dist(x.point(i), y.point(j));
  }
  return s;
}

bool canonical_before(const SampleSet& a, const SampleSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return !std::lexicographical_compare(b.data().begin(), b.data().end(),
                                       a.data().begin(), a.data().end());
}

}  // namespace

double two_sample_distance(const SampleSet& a, const SampleSet& b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("two_sample_distance: empty sample");
  }
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("two_sample_distance: dimension mismatch");
  }
  // Fixed argument order makes the result independent of the call order.
  const SampleSet& x = canonical_before(a, b) ? a : b;
  const SampleSet& y = canonical_before(a, b) ? b : a;
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  const double cross = pair_sum(x, y) / (nx * ny);
  const double wx = pair_sum(x, x) / (nx * nx);
  const double wy = pair_sum(y, y) / (ny * ny);
  return std::max(0.0, 2.0 * cross - wx - wy);
}

double two_sample_distance(std::span<const double> a,
                           std::span<const double> b) {
  return two_sample_distance(SampleSet::scalars(a), SampleSet::scalars(b));
}

namespace {

// Energy statistic of a labelling from the pooled distance matrix.
double labelled_statistic(const std::vector<double>& d, std::size_t n,
                          const std::vector<char>& in_a, double total,
                          double na, double nb) {
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = d.data() + i * n;
    double ra = 0.0;
    double rb = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (in_a[j]) {
        ra += row[j];
      } else {
        rb += row[j];
      }
    }
    if (in_a[i]) {
      saa += ra;
    } else {
      sbb += rb;
    }
  }
  saa *= 2.0;
  sbb *= 2.0;
  const double sab = 0.5 * (total - saa - sbb);
  return 2.0 * sab / (na * nb) - saa / (na * na) - sbb / (nb * nb);
}

}  // namespace

PermutationResult permutation_test(const SampleSet& a, const SampleSet& b,
                                   int permutations, std::uint64_t seed) {
  if (permutations < 1) {
    throw std::invalid_argument("permutation_test: permutations must be >= 1");
  }
  PermutationResult r;
  r.distance = two_sample_distance(a, b);
  r.permutations = permutations;

  SampleSet pooled(a.dim());
  for (std::size_t i = 0; i < a.size(); ++i) pooled.push(a.point(i));
  for (std::size_t i = 0; i < b.size(); ++i) pooled.push(b.point(i));
  const std::size_t n = pooled.size();
  std::vector<double> d(n * n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = dist(pooled.point(i), pooled.point(j));
      d[i * n + j] = v;
      d[j * n + i] = v;
      total += 2.0 * v;
    }
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::vector<char> labels(n, 0);
  std::fill(labels.begin(), labels.begin() + a.size(), 1);
  const double observed = labelled_statistic(d, n, labels, total, na, nb);
  const double slack = 1e-12 * total / static_cast<double>(n * n);

  const KeyedRandom rng(seed, Stream::Permutation);
  std::vector<std::size_t> perm(n);
  int exceed = 0;
  for (int p = 0; p < permutations; ++p) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j =
          rng.bits(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(i)) %
          (i + 1);
      std::swap(perm[i], perm[j]);
    }
    std::fill(labels.begin(), labels.end(), 0);
    for (std::size_t k = 0; k < a.size(); ++k) labels[perm[k]] = 1;
    if (labelled_statistic(d, n, labels, total, na, nb) >= observed - slack) {
      ++exceed;
    }
  }
  r.p_value = (1.0 + exceed) / (1.0 + permutations);
  return r;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_statistic_uniform(std::vector<double> x) {
  if (x.empty()) throw std::invalid_argument("ks_statistic_uniform: empty");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = std::clamp(x[i], 0.0, 1.0);
    d = std::max({d, (i + 1) / n - v, v - i / n});
  }
  return d;
}

double ks_uniform_pvalue(std::vector<double> x) {
  const double n = static_cast<double>(x.size());
  const double d = ks_statistic_uniform(std::move(x));
  const double rn = std::sqrt(n);
  return kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope: need >= 2 paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw std::invalid_argument("loglog_slope: values must be positive");
    }
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace nshomog
