#include "nshomog/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace nshomog {

struct FftwPlans {
  fftw_plan c2r = nullptr;
  fftw_plan r2c = nullptr;

  FftwPlans() = default;
  FftwPlans(const FftwPlans&) = delete;
  FftwPlans& operator=(const FftwPlans&) = delete;
  ~FftwPlans() {
    if (c2r) fftw_destroy_plan(c2r);
    if (r2c) fftw_destroy_plan(r2c);
  }
};

namespace {

// FFTW's planner is not thread-safe; execution on fresh arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const FftwPlans& plans_for(int m) {
  static std::map<int, std::unique_ptr<FftwPlans>> cache;
  std::lock_guard lock(planner_mutex());
  auto& slot = cache[m];
  if (!slot) {
    auto p = std::make_unique<FftwPlans>();
    const std::size_t n = static_cast<std::size_t>(m) * m;
    const std::size_t nh = static_cast<std::size_t>(m) * (m / 2 + 1);
    double* real = fftw_alloc_real(n);
    fftw_complex* cplx = fftw_alloc_complex(nh);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p->c2r = fftw_plan_dft_c2r_2d(m, m, cplx, real, flags);
    p->r2c = fftw_plan_dft_r2c_2d(m, m, real, cplx, flags);
    fftw_free(real);
    fftw_free(cplx);
    if (!p->c2r || !p->r2c) {
      throw std::runtime_error("FFTW planning failed for M = " +
                               std::to_string(m));
    }
    slot = std::move(p);
  }
  return *slot;
}

int wrap(int k, int m) {
  const int r = k % m;
  return r < 0 ? r + m : r;
}

}  // namespace

int fft_friendly_size(int n) {
  for (int c = std::max(n, 1);; ++c) {
    int r = c;
    for (int p : {2, 3, 5}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return c;
  }
}

FourierGrid::FourierGrid(int resolution)
    : m_(resolution),
      plans_(nullptr),
      half_(static_cast<std::size_t>(resolution > 0 ? resolution : 1) *
            ((resolution > 0 ? resolution : 1) / 2 + 1)),
      real_scratch_(static_cast<std::size_t>(resolution > 0 ? resolution : 1) *
                    (resolution > 0 ? resolution : 1)) {
  if (resolution < 1) {
    throw std::invalid_argument("grid resolution must be positive");
  }
  plans_ = &plans_for(resolution);
}

void FourierGrid::clear_half() {
  std::fill(half_.begin(), half_.end(), Complex{});
}

void FourierGrid::accumulate(ModeIndex s, Complex c) {
  const int k1 = wrap(s.s1, m_);
  const int k2 = wrap(s.s2, m_);
  if (k2 > m_ / 2) return;  // carried by the conjugate partner
  half_[static_cast<std::size_t>(k1) * (m_ / 2 + 1) + k2] += c;
}

Complex FourierGrid::bin(ModeIndex s) const {
  const int k1 = wrap(s.s1, m_);
  const int k2 = wrap(s.s2, m_);
  const std::size_t row = static_cast<std::size_t>(m_ / 2 + 1);
  if (k2 <= m_ / 2) return half_[k1 * row + k2];
  return std::conj(half_[wrap(-s.s1, m_) * row + wrap(-s.s2, m_)]);
}

void FourierGrid::inverse(std::span<double> out) {
  if (out.size() != points()) {
    throw std::invalid_argument("synthesis output has wrong size");
  }
  const auto& p = *plans_;
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(half_.data()),
                       out.data());
}

void FourierGrid::forward(std::span<const double> in) {
  if (in.size() != points()) {
    throw std::invalid_argument("analysis input has wrong size");
  }
  std::copy(in.begin(), in.end(), real_scratch_.begin());
  const auto& p = *plans_;
  fftw_execute_dft_r2c(p.r2c, real_scratch_.data(),
                       reinterpret_cast<fftw_complex*>(half_.data()));
}

}  // namespace nshomog
