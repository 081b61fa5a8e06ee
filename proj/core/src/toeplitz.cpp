#include "fracwave/toeplitz.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstring>
#include <memory>
#include <mutex>
#include <string>

#include "fracwave/error.hpp"
#include "fftw_lock.hpp"

namespace fracwave {

namespace detail {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace detail

namespace {

std::mutex& planner_mutex() { return detail::fftw_planner_mutex(); }

template <class T>
struct FftwBuffer {
  T* ptr = nullptr;
  explicit FftwBuffer(std::size_t n) : ptr(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)))) {
    if (ptr == nullptr) throw ResourceError("fftw_malloc failed for " + std::to_string(n) + " elements");
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Circular convolution of `width` columns of length `length` with a fixed
// kernel, by batched real FFTs.
class CirculantCore {
 public:
  CirculantCore(std::span<const double> kernel, std::size_t length, std::size_t width)
      : length_(length), width_(width) {
    const std::size_t L = length_;
    const std::size_t F = L / 2 + 1;
    FftwBuffer<double> real(L * width);
    FftwBuffer<fftw_complex> freq(F * width);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      const int n = static_cast<int>(L);
      const int w = static_cast<int>(width);
      forward_ = fftw_plan_many_dft_r2c(1, &n, w, real.ptr, nullptr, w, 1, freq.ptr, nullptr, w, 1,
                                        FFTW_ESTIMATE);
      backward_ = fftw_plan_many_dft_c2r(1, &n, w, freq.ptr, nullptr, w, 1, real.ptr, nullptr, w, 1,
                                         FFTW_ESTIMATE);
      if (forward_ == nullptr || backward_ == nullptr) {
        release();
        throw ResourceError("FFTW could not create a plan of length " + std::to_string(L));
      }
    }

    // Kernel spectrum via a single-column transform, scaled by 1/L so the
    // product needs no normalisation pass.
    FftwBuffer<double> kr(L);
    FftwBuffer<fftw_complex> kf(F);
    fftw_plan kp = nullptr;
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      kp = fftw_plan_dft_r2c_1d(static_cast<int>(L), kr.ptr, kf.ptr, FFTW_ESTIMATE);
    }
    std::fill(kr.ptr, kr.ptr + L, 0.0);
    std::copy(kernel.begin(), kernel.end(), kr.ptr);
    fftw_execute(kp);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(kp);
    }
    spectrum_.resize(F);
    const double scale = 1.0 / static_cast<double>(L);
    for (std::size_t k = 0; k < F; ++k) spectrum_[k] = {kf.ptr[k][0] * scale, kf.ptr[k][1] * scale};
  }

  ~CirculantCore() { release(); }
  CirculantCore(const CirculantCore&) = delete;
  CirculantCore& operator=(const CirculantCore&) = delete;

  [[nodiscard]] std::size_t length() const noexcept { return length_; }

  /// `rows` leading rows of x (row-major, width columns) are the input, the
  /// rest is zero; out receives rows [first, first + count) of the result.
  void convolve(std::span<const double> x, std::size_t rows, std::size_t first, std::size_t count,
                std::span<double> out) const {
    const std::size_t L = length_;
    const std::size_t F = L / 2 + 1;
    const std::size_t w = width_;
    FftwBuffer<double> real(L * w);
    FftwBuffer<fftw_complex> freq(F * w);
    std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(rows * w), real.ptr);
    std::fill(real.ptr + rows * w, real.ptr + L * w, 0.0);
    fftw_execute_dft_r2c(forward_, real.ptr, freq.ptr);
    for (std::size_t k = 0; k < F; ++k) {
      const std::complex<double> s = spectrum_[k];
      fftw_complex* row = freq.ptr + k * w;
      for (std::size_t c = 0; c < w; ++c) {
        const std::complex<double> p = std::complex<double>(row[c][0], row[c][1]) * s;
        row[c][0] = p.real();
        row[c][1] = p.imag();
      }
    }
    fftw_execute_dft_c2r(backward_, freq.ptr, real.ptr);
    std::copy(real.ptr + first * w, real.ptr + (first + count) * w, out.begin());
  }

 private:
  void release() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward_ != nullptr) fftw_destroy_plan(forward_);
    if (backward_ != nullptr) fftw_destroy_plan(backward_);
    forward_ = backward_ = nullptr;
  }

  std::size_t length_ = 1;
  std::size_t width_ = 1;
  std::vector<std::complex<double>> spectrum_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace

struct ToeplitzPlan::Impl {
  std::size_t blocks = 0;
  std::size_t width = 0;
  std::vector<double> kernel;
  std::unique_ptr<CirculantCore> core;
};

ToeplitzPlan::ToeplitzPlan(std::span<const double> kernel, std::size_t blocks, std::size_t width)
    : impl_(std::make_unique<Impl>()) {
  if (kernel.size() < blocks) {
    throw ConfigError("ToeplitzPlan: kernel has " + std::to_string(kernel.size()) +
                      " entries, need " + std::to_string(blocks));
  }
  if (blocks == 0 || width == 0) throw ConfigError("ToeplitzPlan: empty shape");
  Impl& m = *impl_;
  m.blocks = blocks;
  m.width = width;
  m.kernel.assign(kernel.begin(), kernel.begin() + static_cast<std::ptrdiff_t>(blocks));
  m.core = std::make_unique<CirculantCore>(m.kernel, next_pow2(2 * blocks - 1), width);
}

ToeplitzPlan::~ToeplitzPlan() = default;
ToeplitzPlan::ToeplitzPlan(ToeplitzPlan&&) noexcept = default;
ToeplitzPlan& ToeplitzPlan::operator=(ToeplitzPlan&&) noexcept = default;

std::size_t ToeplitzPlan::blocks() const noexcept { return impl_->blocks; }
std::size_t ToeplitzPlan::width() const noexcept { return impl_->width; }
std::size_t ToeplitzPlan::fft_length() const noexcept { return impl_->core->length(); }
std::span<const double> ToeplitzPlan::kernel() const noexcept { return impl_->kernel; }

void ToeplitzPlan::apply(std::span<const double> x, std::span<double> y) const {
  const Impl& m = *impl_;
  const std::size_t n = m.blocks * m.width;
  if (x.size() != n || y.size() != n) {
    throw ConfigError("ToeplitzPlan::apply: expected " + std::to_string(n) + " values, got " +
                      std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
  m.core->convolve(x, m.blocks, 0, m.blocks, y);
}

struct ToeplitzTailPlan::Impl {
  std::size_t blocks = 0;
  std::size_t split = 0;
  std::size_t width = 0;
  std::unique_ptr<CirculantCore> core;
};

ToeplitzTailPlan::ToeplitzTailPlan(std::span<const double> kernel, std::size_t blocks,
                                   std::size_t split, std::size_t width)
    : impl_(std::make_unique<Impl>()) {
  if (kernel.size() < blocks) {
    throw ConfigError("ToeplitzTailPlan: kernel has " + std::to_string(kernel.size()) +
                      " entries, need " + std::to_string(blocks));
  }
  if (width == 0 || split == 0 || split >= blocks) {
    throw ConfigError("ToeplitzTailPlan: need 0 < split < blocks and a nonzero width");
  }
  Impl& m = *impl_;
  m.blocks = blocks;
  m.split = split;
  m.width = width;
  // Lags i - j lie in [1, blocks), so a circular length >= blocks has no
  // wrap-around in the requested rows.
  m.core = std::make_unique<CirculantCore>(kernel.first(blocks), next_pow2(blocks), width);
}

ToeplitzTailPlan::~ToeplitzTailPlan() = default;
ToeplitzTailPlan::ToeplitzTailPlan(ToeplitzTailPlan&&) noexcept = default;
ToeplitzTailPlan& ToeplitzTailPlan::operator=(ToeplitzTailPlan&&) noexcept = default;

std::size_t ToeplitzTailPlan::blocks() const noexcept { return impl_->blocks; }
std::size_t ToeplitzTailPlan::split() const noexcept { return impl_->split; }
std::size_t ToeplitzTailPlan::fft_length() const noexcept { return impl_->core->length(); }

void ToeplitzTailPlan::apply(std::span<const double> x, std::span<double> y) const {
  const Impl& m = *impl_;
  if (x.size() != m.split * m.width || y.size() != (m.blocks - m.split) * m.width) {
    throw ConfigError("ToeplitzTailPlan::apply: shape mismatch");
  }
  m.core->convolve(x, m.split, m.split, m.blocks - m.split, y);
}

std::vector<double> toeplitz_matvec(std::span<const double> kernel, std::span<const double> blocks,
                                    const ToeplitzPlan& plan) {
  const std::size_t nb = plan.blocks();
  if (kernel.size() < nb) {
    throw ConfigError("toeplitz_matvec: kernel has " + std::to_string(kernel.size()) +
                      " entries but the plan covers " + std::to_string(nb) + " blocks");
  }
  if (!std::equal(kernel.begin(), kernel.begin() + static_cast<std::ptrdiff_t>(nb),
                  plan.kernel().begin())) {
    throw ConfigError("toeplitz_matvec: kernel differs from the one the plan was built for");
  }
  std::vector<double> y(blocks.size());
  plan.apply(blocks, y);
  return y;
}

std::vector<double> toeplitz_matvec_direct(std::span<const double> kernel,
                                           std::span<const double> blocks, std::size_t width) {
  if (width == 0 || blocks.size() % width != 0) {
    throw ConfigError("toeplitz_matvec_direct: block data is not a multiple of the width");
  }
  const std::size_t nb = blocks.size() / width;
  if (kernel.size() < nb) throw ConfigError("toeplitz_matvec_direct: kernel too short");
  std::vector<double> y(blocks.size(), 0.0);
  for (std::size_t i = 0; i < nb; ++i) {
    double* yi = y.data() + i * width;
    for (std::size_t m = 0; m <= i; ++m) {
      const double k = kernel[m];
      const double* x = blocks.data() + (i - m) * width;
      for (std::size_t c = 0; c < width; ++c) yi[c] += k * x[c];
    }
  }
  return y;
}

}  // namespace fracwave
