#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "fracwave/mesh_fem.hpp"
#include "fracwave/scheme.hpp"
#include "fracwave/toeplitz.hpp"
#include "fracwave/tridiagonal.hpp"

namespace fracwave {

/// Time-stepping with incrementally accumulated history, O(J^2 N).
[[nodiscard]] SolutionField solve_stepping(const DiscreteSystem& sys);

struct FastSolverOptions {
  /// Ranges of at most this many steps are marched directly.
  std::size_t floor = 32;
};

/// Divide and conquer over time: solve the first half, add the history it
/// induces on the second half with one FFT Toeplitz product, recurse.
/// O(N J log^2 J). Any J is accepted; halves may differ by one step.
[[nodiscard]] SolutionField solve_fast_dnc(const DiscreteSystem& sys,
                                           const FastSolverOptions& options = {});

enum class ResidualMethod { Direct, Fft };

/// Euclidean norm of the residual of each block row i = 1..J (index i-1).
[[nodiscard]] std::vector<double> residual_norms(const DiscreteSystem& sys, const SolutionField& U,
                                                 ResidualMethod method = ResidualMethod::Fft);

/// max_i |r_i| / max(1, max_i |F_i|).
[[nodiscard]] double relative_residual(const DiscreteSystem& sys, const SolutionField& U,
                                       ResidualMethod method = ResidualMethod::Fft);

enum class DumpFormat { Csv, Binary };

/// Header line "J N alpha T", then (J+1) * N values by time row: one row of
/// comma-separated values per line (Csv) or raw little-endian float64 (Binary).
void write_solution(const std::filesystem::path& path, const SolutionField& U, DumpFormat format);

/// Throws IoError with the path on malformed or truncated files.
[[nodiscard]] SolutionField read_solution(const std::filesystem::path& path, DumpFormat format);

}  // namespace fracwave
