#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fracwave {

/// FFT plan for lower-triangular Toeplitz products on n blocks of width N:
/// y_i = sum_{m=0}^{i} kernel_m x_{i-m}, one scalar convolution per column.
/// The kernel spectrum is taken at construction. Thread-safe to share
/// for concurrent apply calls.
class ToeplitzPlan {
 public:
  /// Uses kernel[0..blocks). Throws ConfigError if the kernel is shorter.
  ToeplitzPlan(std::span<const double> kernel, std::size_t blocks, std::size_t width);
  ~ToeplitzPlan();
  ToeplitzPlan(ToeplitzPlan&&) noexcept;
  ToeplitzPlan& operator=(ToeplitzPlan&&) noexcept;
  ToeplitzPlan(const ToeplitzPlan&) = delete;
  ToeplitzPlan& operator=(const ToeplitzPlan&) = delete;

  [[nodiscard]] std::size_t blocks() const noexcept;
  [[nodiscard]] std::size_t width() const noexcept;
  /// Power of two >= 2 * blocks - 1.
  [[nodiscard]] std::size_t fft_length() const noexcept;
  /// The kernel prefix the spectrum was computed from.
  [[nodiscard]] std::span<const double> kernel() const noexcept;

  /// x and y are blocks x width, row-major; y is overwritten.
  void apply(std::span<const double> x, std::span<double> y) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Tail of the same product for inputs confined to the first `split` blocks:
/// y_i = sum_{j<split} kernel_{i-j} x_j for i = split..blocks-1. One circular
/// FFT of length >= blocks suffices since no lag reaches the length.
class ToeplitzTailPlan {
 public:
  /// Uses kernel[0..blocks); ConfigError unless 0 < split < blocks.
  ToeplitzTailPlan(std::span<const double> kernel, std::size_t blocks, std::size_t split,
                   std::size_t width);
  ~ToeplitzTailPlan();
  ToeplitzTailPlan(ToeplitzTailPlan&&) noexcept;
  ToeplitzTailPlan& operator=(ToeplitzTailPlan&&) noexcept;
  ToeplitzTailPlan(const ToeplitzTailPlan&) = delete;
  ToeplitzTailPlan& operator=(const ToeplitzTailPlan&) = delete;

  [[nodiscard]] std::size_t blocks() const noexcept;
  [[nodiscard]] std::size_t split() const noexcept;
  [[nodiscard]] std::size_t fft_length() const noexcept;

  /// x is split x width, y is (blocks - split) x width; y is overwritten.
  void apply(std::span<const double> x, std::span<double> y) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// y_i = sum_{m=0}^{i} kernel_m blocks_{i-m} with a plan built for this kernel.
/// Throws ConfigError when the plan's shape does not match.
[[nodiscard]] std::vector<double> toeplitz_matvec(std::span<const double> kernel,
                                                  std::span<const double> blocks,
                                                  const ToeplitzPlan& plan);

/// Same product by direct O(n^2 N) summation.
[[nodiscard]] std::vector<double> toeplitz_matvec_direct(std::span<const double> kernel,
                                                         std::span<const double> blocks,
                                                         std::size_t width);

}  // namespace fracwave
