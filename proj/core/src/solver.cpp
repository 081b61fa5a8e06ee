#include "fracwave/solver.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "fracwave/error.hpp"

namespace fracwave {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void check_system(const DiscreteSystem& sys) {
  const std::size_t J = sys.time.J;
  const std::size_t N = sys.space.N;
  if (sys.rhs.size() != J * N) throw ConfigError("system right-hand side has the wrong shape");
  if (sys.u0h.size() != N) throw ConfigError("system initial vector has the wrong length");
  if (sys.kappa.size() < J) throw ConfigError("system kernel shorter than the number of steps");
  if (sys.mass.order() != N || sys.stiffness.order() != N) {
    throw ConfigError("system operators do not match the mesh");
  }
}

// One step: B U_i = F_i + M ((kappa_0 U_{i-1} - hist_i) / tau) - (tau/2) A U_{i-1}.
class Stepper {
 public:
  explicit Stepper(const DiscreteSystem& sys)
      : sys_(sys), factor_(step_operator(sys)), v_(sys.space.N), rhs_(sys.space.N) {}

  void step(std::size_t i, std::span<const double> prev, std::span<const double> hist,
            std::span<double> out) {
    const double tau = sys_.time.tau;
    const double k0 = sys_.kappa[0];
    const std::size_t N = sys_.space.N;
    for (std::size_t n = 0; n < N; ++n) v_[n] = (k0 * prev[n] - hist[n]) / tau;
    const auto F = sys_.rhs_row(i);
    std::copy(F.begin(), F.end(), rhs_.begin());
    sys_.mass.apply_add(v_, 1.0, rhs_);
    sys_.stiffness.apply_add(prev, -0.5 * tau, rhs_);
    factor_.solve_in_place(rhs_);
    std::copy(rhs_.begin(), rhs_.end(), out.begin());
  }

 private:
  const DiscreteSystem& sys_;
  TridiagonalFactor factor_;
  std::vector<double> v_;
  std::vector<double> rhs_;
};

class DncSolver {
 public:
  DncSolver(const DiscreteSystem& sys, const FastSolverOptions& opt, SolutionField& U)
      : sys_(sys),
        floor_(std::max<std::size_t>(opt.floor, 1)),
        N_(sys.space.N),
        U_(U),
        w_((sys.time.J + 1) * N_, 0.0),
        hist_((sys.time.J + 1) * N_, 0.0),
        stepper_(sys) {}

  void run() { solve(1, sys_.time.J + 1); }

 private:
  std::span<double> w(std::size_t i) { return std::span<double>(w_).subspan(i * N_, N_); }
  std::span<double> hist(std::size_t i) { return std::span<double>(hist_).subspan(i * N_, N_); }

  const ToeplitzTailPlan& plan(std::size_t n, std::size_t split) {
    const auto key = std::make_pair(n, split);
    auto it = plans_.find(key);
    if (it == plans_.end()) {
      it = plans_.emplace(key, ToeplitzTailPlan(sys_.kappa.view(), n, split, N_)).first;
    }
    return it->second;
  }

  void solve(std::size_t l, std::size_t r) {
    if (r - l <= floor_) {
      march(l, r);
      return;
    }
    const std::size_t mid = l + (r - l) / 2;
    solve(l, mid);
    const std::size_t n = r - l;
    std::vector<double> y((r - mid) * N_);
    plan(n, mid - l).apply(std::span<const double>(w_).subspan(l * N_, (mid - l) * N_), y);
    for (std::size_t i = mid; i < r; ++i) {
      auto h = hist(i);
      const double* yi = y.data() + (i - mid) * N_;
      for (std::size_t c = 0; c < N_; ++c) h[c] += yi[c];
    }
    solve(mid, r);
  }

  void march(std::size_t l, std::size_t r) {
    for (std::size_t i = l; i < r; ++i) {
      auto h = hist(i);
      for (std::size_t j = l; j < i; ++j) {
        const double k = sys_.kappa[i - j];
        const auto wj = w(j);
        for (std::size_t c = 0; c < N_; ++c) h[c] += k * wj[c];
      }
      stepper_.step(i, U_.row(i - 1), h, U_.row(i));
      auto wi = w(i);
      const auto cur = U_.row(i);
      const auto prev = U_.row(i - 1);
      for (std::size_t c = 0; c < N_; ++c) wi[c] = cur[c] - prev[c];
    }
  }

  const DiscreteSystem& sys_;
  std::size_t floor_;
  std::size_t N_;
  SolutionField& U_;
  std::vector<double> w_;
  std::vector<double> hist_;
  Stepper stepper_;
  std::map<std::pair<std::size_t, std::size_t>, ToeplitzTailPlan> plans_;
};

template <class T>
T to_little_endian(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

}  // namespace

SolutionField solve_stepping(const DiscreteSystem& sys) {
  check_system(sys);
  const std::size_t J = sys.time.J;
  const std::size_t N = sys.space.N;
  SolutionField U(sys.time, sys.space, sys.alpha);
  std::copy(sys.u0h.begin(), sys.u0h.end(), U.row(0).begin());
  Stepper stepper(sys);
  std::vector<double> w((J + 1) * N, 0.0);
  std::vector<double> hist(N);
  for (std::size_t i = 1; i <= J; ++i) {
    std::fill(hist.begin(), hist.end(), 0.0);
    for (std::size_t m = 1; m < i; ++m) {
      const double k = sys.kappa[m];
      const double* wj = w.data() + (i - m) * N;
      for (std::size_t c = 0; c < N; ++c) hist[c] += k * wj[c];
    }
    stepper.step(i, U.row(i - 1), hist, U.row(i));
    const auto cur = U.row(i);
    const auto prev = U.row(i - 1);
    for (std::size_t c = 0; c < N; ++c) w[i * N + c] = cur[c] - prev[c];
  }
  return U;
}

SolutionField solve_fast_dnc(const DiscreteSystem& sys, const FastSolverOptions& options) {
  check_system(sys);
  SolutionField U(sys.time, sys.space, sys.alpha);
  std::copy(sys.u0h.begin(), sys.u0h.end(), U.row(0).begin());
  DncSolver(sys, options, U).run();
  return U;
}

std::vector<double> residual_norms(const DiscreteSystem& sys, const SolutionField& U,
                                   ResidualMethod method) {
  check_system(sys);
  const std::size_t J = sys.time.J;
  const std::size_t N = sys.space.N;
  if (U.time.J != J || U.space.N != N) throw ConfigError("residual: field does not match system");
  const double tau = sys.time.tau;

  // w_i = U_i - U_{i-1}, i = 1..J, stored at i-1.
  std::vector<double> w(J * N);
  for (std::size_t i = 1; i <= J; ++i) {
    for (std::size_t c = 0; c < N; ++c) w[(i - 1) * N + c] = U.at(i, c) - U.at(i - 1, c);
  }
  // conv_i = sum_{m=0}^{i-1} kappa_m w_{i-m}
  std::vector<double> conv;
  if (method == ResidualMethod::Direct) {
    conv = toeplitz_matvec_direct(sys.kappa.view(), w, N);
  } else {
    const ToeplitzPlan plan(sys.kappa.view(), J, N);
    conv = toeplitz_matvec(sys.kappa.view(), w, plan);
  }

  std::vector<double> out(J);
  std::vector<double> r(N), s(N);
  for (std::size_t i = 1; i <= J; ++i) {
    const auto F = sys.rhs_row(i);
    for (std::size_t c = 0; c < N; ++c) {
      r[c] = -F[c];
      s[c] = U.at(i - 1, c) + U.at(i, c);
    }
    sys.mass.apply_add(std::span<const double>(conv).subspan((i - 1) * N, N), 1.0 / tau, r);
    sys.stiffness.apply_add(s, 0.5 * tau, r);
    out[i - 1] = norm2(r);
  }
  return out;
}

double relative_residual(const DiscreteSystem& sys, const SolutionField& U, ResidualMethod method) {
  const std::vector<double> r = residual_norms(sys, U, method);
  double fmax = 0.0;
  for (std::size_t i = 1; i <= sys.time.J; ++i) fmax = std::max(fmax, norm2(sys.rhs_row(i)));
  const double rmax = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
  return rmax / std::max(1.0, fmax);
}

void write_solution(const std::filesystem::path& path, const SolutionField& U, DumpFormat format) {
  std::ofstream out(path, format == DumpFormat::Binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  std::ostringstream header;
  header.precision(17);
  header << U.time.J << ' ' << U.space.N << ' ' << U.alpha << ' ' << U.time.T << '\n';
  out << header.str();
  if (format == DumpFormat::Binary) {
    for (double v : U.values) {
      const double le = to_little_endian(v);
      out.write(reinterpret_cast<const char*>(&le), sizeof(le));
    }
  } else {
    out.precision(17);
    for (std::size_t j = 0; j < U.rows(); ++j) {
      const auto row = U.row(j);
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (k) out << ',';
        out << row[k];
      }
      out << '\n';
    }
  }
  if (!out) throw IoError("write failed for " + path.string());
}

SolutionField read_solution(const std::filesystem::path& path, DumpFormat format) {
  std::ifstream in(path, format == DumpFormat::Binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": missing header");
  std::istringstream hs(line);
  std::size_t J = 0, N = 0;
  double alpha = 0.0, T = 0.0;
  if (!(hs >> J >> N >> alpha >> T) || J == 0 || N == 0 || !(T > 0.0)) {
    throw IoError(path.string() + ": malformed header '" + line + "'");
  }
  SolutionField U(TemporalGrid::uniform(J, T), SpatialMesh::uniform(N), alpha);
  if (format == DumpFormat::Binary) {
    for (double& v : U.values) {
      double le = 0.0;
      if (!in.read(reinterpret_cast<char*>(&le), sizeof(le))) {
        throw IoError(path.string() + ": truncated binary payload");
      }
      v = to_little_endian(le);
    }
  } else {
    for (std::size_t j = 0; j < U.rows(); ++j) {
      if (!std::getline(in, line)) throw IoError(path.string() + ": truncated at row " + std::to_string(j));
      std::istringstream rs(line);
      std::string cell;
      auto row = U.row(j);
      for (std::size_t k = 0; k < N; ++k) {
        if (!std::getline(rs, cell, ',')) {
          throw IoError(path.string() + ": row " + std::to_string(j) + " is short");
        }
        try {
          row[k] = std::stod(cell);
        } catch (const std::exception&) {
          throw IoError(path.string() + ": bad value '" + cell + "' in row " + std::to_string(j));
        }
      }
    }
  }
  return U;
}

}  // namespace fracwave
