#pragma once

#include <mutex>

namespace fracwave::detail {

// The FFTW planner is not reentrant; execution with new arrays is.
std::mutex& fftw_planner_mutex();

}  // namespace fracwave::detail
