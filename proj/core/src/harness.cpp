#include "fracwave/harness.hpp"

#include <unistd.h>

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "fracwave/error.hpp"
#include "fracwave/spectral_ref.hpp"
#include "json.hpp"

namespace fracwave {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string num(double v) { return fmt("%.17g", v); }

std::size_t available_memory() {
  std::ifstream in("/proc/meminfo");
  std::string key;
  std::size_t kb = 0;
  std::string unit;
  while (in >> key >> kb >> unit) {
    if (key == "MemAvailable:") return kb * 1024;
  }
  const long pages = sysconf(_SC_PHYS_PAGES);
  const long size = sysconf(_SC_PAGE_SIZE);
  if (pages > 0 && size > 0) return static_cast<std::size_t>(pages) * static_cast<std::size_t>(size);
  return 0;
}

double elapsed(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// Run f(0..count-1) on up to `threads` workers; rethrows the first failure.
template <class F>
void parallel_for(std::size_t count, std::size_t threads, F&& f) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(s);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string to_string(ReferenceKind kind) {
  return kind == ReferenceKind::FineGrid ? "fine-grid" : "spectral";
}

ReferenceKind parse_reference_kind(const std::string& text) {
  if (text == "fine-grid" || text == "fine") return ReferenceKind::FineGrid;
  if (text == "spectral") return ReferenceKind::Spectral;
  throw ConfigError("unknown reference kind '" + text + "' (expected fine-grid or spectral)");
}

std::pair<int, int> parse_level_range(const std::string& text) {
  const auto dash = text.find('-');
  try {
    std::size_t used = 0;
    if (dash == std::string::npos) {
      const int k = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {k, k};
    }
    const std::string a = text.substr(0, dash), b = text.substr(dash + 1);
    const int lo = std::stoi(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    const int hi = std::stoi(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ConfigError("levels must look like '4-7' or '5', got '" + text + "'");
  }
}

int time_exponent(std::size_t J, const std::string& what) {
  if (J == 0 || (J & (J - 1)) != 0) {
    throw ConfigError(what + ": J = " + std::to_string(J) + " is not a power of two");
  }
  return std::countr_zero(J);
}

int space_exponent(std::size_t N, const std::string& what) {
  const std::size_t m = N + 1;
  if (N == 0 || (m & (m - 1)) != 0) {
    throw ConfigError(what + ": N = " + std::to_string(N) + " is not of the form 2^k - 1");
  }
  return std::countr_zero(m);
}

PredictedOrder predicted_order(int example, StudyAxis vary, double alpha, bool e2) {
  const bool space = vary == StudyAxis::Space;
  if (example == 1) {
    if (space) return {1.0 - 1.0 / alpha, 0.1};
    return {0.5 * (alpha - 1.0), 0.15};
  }
  if (!space) return {0.5 * (3.0 - alpha), 0.1};
  const double r = 3.0 / alpha - 1.0;
  return {e2 ? r : std::min(1.0, r), 0.1};
}

int StudyConfig::fixed() const {
  if (vary == StudyAxis::Space) return fixed_time_exponent.value_or(12);
  return fixed_space_exponent.value_or(9);
}

ProblemSpec StudyConfig::problem(double alpha) const {
  return example == 1 ? example1(alpha) : example2(alpha);
}

void StudyConfig::validate() const {
  if (alphas.empty()) throw ConfigError("alpha: at least one value is required");
  for (double a : alphas) {
    if (!(a > 1.0 && a < 2.0)) throw ConfigError("alpha: " + num(a) + " is outside (1, 2)");
  }
  if (example != 1 && example != 2) {
    throw ConfigError("example: must be 1 or 2, got " + std::to_string(example));
  }
  if (level_min < 1 || level_min > level_max) {
    throw ConfigError("levels: need 1 <= min <= max, got " + std::to_string(level_min) + "-" +
                      std::to_string(level_max));
  }
  if (ref_time_exponent < 1 || ref_time_exponent > 22 || ref_space_exponent < 1 ||
      ref_space_exponent > 22) {
    throw ConfigError("ref-J/ref-N: exponents must lie in 1..22");
  }
  const bool space = vary == StudyAxis::Space;
  const int ref_varied = space ? ref_space_exponent : ref_time_exponent;
  const int ref_fixed = space ? ref_time_exponent : ref_space_exponent;
  if (level_max > ref_varied - 2) {
    throw ConfigError("levels: finest level 2^-" + std::to_string(level_max) +
                      " must be at least two dyadic steps coarser than the reference 2^-" +
                      std::to_string(ref_varied) + " (raise --ref-" + (space ? "N" : "J") +
                      " or lower --levels)");
  }
  if (fixed() < 1 || fixed() > ref_fixed) {
    throw ConfigError("fixed " + std::string(space ? "tau" : "h") + " exponent " +
                      std::to_string(fixed()) + " must lie in 1.." + std::to_string(ref_fixed) +
                      " so the study grids nest in the reference");
  }
  if (ref_kind == ReferenceKind::Spectral) {
    if (!(spectral_tol > 0.0)) throw ConfigError("spectral_tol: must be positive");
    if (spectral_modes == 0) throw ConfigError("spectral_modes: must be positive");
  }
  if (threads == 0) throw ConfigError("threads: must be at least 1");
}

StudyConfig StudyConfig::from_json(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  StudyConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "alpha") {
        c.alphas.clear();
        if (v.is_array()) {
          for (const auto& a : v) c.alphas.push_back(a.get<double>());
        } else {
          c.alphas.push_back(v.get<double>());
        }
      } else if (key == "example") {
        c.example = v.get<int>();
      } else if (key == "vary") {
        c.vary = parse_axis(v.get<std::string>());
      } else if (key == "levels") {
        if (v.is_array()) {
          if (v.size() != 2) throw ConfigError("config: levels array needs [min, max]");
          c.level_min = v[0].get<int>();
          c.level_max = v[1].get<int>();
        } else {
          std::tie(c.level_min, c.level_max) = parse_level_range(v.get<std::string>());
        }
      } else if (key == "J") {
        c.fixed_time_exponent = time_exponent(v.get<std::size_t>(), "config J");
      } else if (key == "N") {
        c.fixed_space_exponent = space_exponent(v.get<std::size_t>(), "config N");
      } else if (key == "ref_J") {
        c.ref_time_exponent = time_exponent(v.get<std::size_t>(), "config ref_J");
      } else if (key == "ref_N") {
        c.ref_space_exponent = space_exponent(v.get<std::size_t>(), "config ref_N");
      } else if (key == "ref_kind") {
        c.ref_kind = parse_reference_kind(v.get<std::string>());
      } else if (key == "spectral_tol") {
        c.spectral_tol = v.get<double>();
      } else if (key == "spectral_modes") {
        c.spectral_modes = v.get<std::size_t>();
      } else if (key == "e2") {
        const auto m = v.get<std::string>();
        if (m == "cell-quadrature") {
          c.e2_method = FracNormMethod::CellQuadrature;
        } else if (m == "cell-average") {
          c.e2_method = FracNormMethod::CellAverage;
        } else {
          throw ConfigError("config: e2 must be cell-quadrature or cell-average");
        }
      } else if (key == "csv") {
        c.csv = v.get<std::string>();
      } else if (key == "plot_dir") {
        c.plot_dir = v.get<std::string>();
      } else if (key == "threads") {
        c.threads = v.get<std::size_t>();
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else {
        throw ConfigError("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: wrong value type: ") + e.what());
  }
  return c;
}

StudyConfig StudyConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::size_t estimate_study_memory(const StudyConfig& cfg) {
  const std::size_t J = std::size_t{1} << cfg.ref_time_exponent;
  const std::size_t N = (std::size_t{1} << cfg.ref_space_exponent) - 1;
  const std::size_t field = (J + 1) * N * sizeof(double);
  const std::size_t workers = std::max<std::size_t>(1, cfg.threads);
  // Reference plus solver history; per worker the prolonged difference, its
  // derivative and the FFT buffers of the E2 convolutions.
  return field * 3 + workers * field * 8;
}

SolutionField solve_problem(const ProblemSpec& p, std::size_t J, std::size_t N) {
  const DiscreteSystem sys =
      assemble_system(p, TemporalGrid::uniform(J, p.T), SpatialMesh::uniform(N));
  return solve_fast_dnc(sys);
}

std::vector<ConvergenceReport> run_convergence_study(const StudyConfig& cfg, const LogSink& log) {
  cfg.validate();
  auto say = [&](const std::string& m) {
    if (log) log(m);
  };
  const std::size_t need = estimate_study_memory(cfg);
  const std::size_t have = available_memory();
  if (have != 0 && need > have) {
    throw ResourceError("study needs about " + std::to_string(need >> 20) + " MiB but only " +
                        std::to_string(have >> 20) +
                        " MiB are available; lower --ref-J/--ref-N or --threads");
  }

  const bool space = cfg.vary == StudyAxis::Space;
  const std::size_t Jref = std::size_t{1} << cfg.ref_time_exponent;
  const std::size_t Nref = (std::size_t{1} << cfg.ref_space_exponent) - 1;
  const std::size_t nlev = static_cast<std::size_t>(cfg.level_max - cfg.level_min + 1);

  std::vector<ConvergenceReport> reports;
  for (double alpha : cfg.alphas) {
    const ProblemSpec p = cfg.problem(alpha);
    const auto t0 = std::chrono::steady_clock::now();
    SolutionField ref;
    if (cfg.ref_kind == ReferenceKind::FineGrid) {
      ref = solve_problem(p, Jref, Nref);
    } else {
      const SpectralSolution s = spectral_solution(p, cfg.spectral_modes);
      SpectralOptions opt;
      opt.tol = cfg.spectral_tol;
      opt.threads = cfg.threads;
      ref = reference_solution(s, TemporalGrid::uniform(Jref, p.T), SpatialMesh::uniform(Nref), opt)
                .field;
    }
    say("alpha=" + fmt("%g", alpha) + " reference " + to_string(cfg.ref_kind) + " J=" +
        std::to_string(Jref) + " N=" + std::to_string(Nref) + " (" + fmt("%.2f", elapsed(t0)) +
        " s)");

    ConvergenceReport rep;
    rep.alpha = alpha;
    rep.example = cfg.example;
    rep.vary = cfg.vary;
    rep.levels.resize(nlev);
    std::mutex log_mutex;
    parallel_for(nlev, cfg.threads, [&](std::size_t idx) {
      const int k = cfg.level_min + static_cast<int>(idx);
      const auto t1 = std::chrono::steady_clock::now();
      const std::size_t J = std::size_t{1} << (space ? cfg.fixed() : k);
      const std::size_t N = (std::size_t{1} << (space ? k : cfg.fixed())) - 1;
      const SolutionField U = solve_problem(p, J, N);
      LevelResult r;
      r.level = k;
      r.tau = U.time.tau;
      r.h = U.space.h;
      r.E1 = error_e1(U, ref);
      r.E2 = error_e2(U, ref, cfg.e2_method);
      rep.levels[idx] = r;
      std::lock_guard<std::mutex> lock(log_mutex);
      say("alpha=" + fmt("%g", alpha) + " level " + std::to_string(k) + ": J=" +
          std::to_string(J) + " N=" + std::to_string(N) + " E1=" + fmt("%.6e", r.E1) +
          " E2=" + fmt("%.6e", r.E2) + " (" + fmt("%.2f", elapsed(t1)) + " s)");
    });
    rep.update_orders();
    reports.push_back(std::move(rep));
  }
  return reports;
}

std::string format_report_csv(const std::vector<ConvergenceReport>& reports) {
  std::string out = "alpha,example,vary,level,tau,h,E1,E2,order_E1,order_E2\n";
  for (const auto& r : reports) {
    for (std::size_t k = 0; k < r.levels.size(); ++k) {
      const LevelResult& l = r.levels[k];
      out += num(r.alpha) + ',' + std::to_string(r.example) + ',' + to_string(r.vary) + ',' +
             std::to_string(l.level) + ',' + num(l.tau) + ',' + num(l.h) + ',' + num(l.E1) + ',' +
             num(l.E2) + ',';
      if (k > 0 && k - 1 < r.order_E1.size()) out += num(r.order_E1[k - 1]);
      out += ',';
      if (k > 0 && k - 1 < r.order_E2.size()) out += num(r.order_E2[k - 1]);
      out += '\n';
    }
  }
  return out;
}

std::vector<ConvergenceReport> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "alpha,example,vary,level,tau,h,E1,E2,order_E1,order_E2") {
    throw IoError("report CSV: missing or unexpected header");
  }
  std::vector<ConvergenceReport> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 10) {
      throw IoError("report CSV line " + std::to_string(lineno) + ": expected 10 fields");
    }
    try {
      const double alpha = std::stod(cells[0]);
      const int example = std::stoi(cells[1]);
      const StudyAxis vary = parse_axis(cells[2]);
      LevelResult l;
      l.level = std::stoi(cells[3]);
      l.tau = std::stod(cells[4]);
      l.h = std::stod(cells[5]);
      l.E1 = std::stod(cells[6]);
      l.E2 = std::stod(cells[7]);
      const bool first = cells[8].empty() && cells[9].empty();
      if (first || out.empty() || out.back().alpha != alpha || out.back().example != example ||
          out.back().vary != vary) {
        ConvergenceReport r;
        r.alpha = alpha;
        r.example = example;
        r.vary = vary;
        out.push_back(r);
      }
      ConvergenceReport& r = out.back();
      if (!r.levels.empty()) {
        r.order_E1.push_back(std::stod(cells[8]));
        r.order_E2.push_back(std::stod(cells[9]));
      }
      r.levels.push_back(l);
    } catch (const std::logic_error& e) {
      throw IoError("report CSV line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void emit_outputs(const std::vector<ConvergenceReport>& reports, const std::filesystem::path& csv,
                  const std::filesystem::path& plot_dir) {
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw IoError("cannot open " + csv.string() + " for writing");
    out << format_report_csv(reports);
    if (!out) throw IoError("write failed for " + csv.string());
  }
  if (plot_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(plot_dir, ec);
  if (ec) throw IoError("cannot create " + plot_dir.string() + ": " + ec.message());
  for (const auto& r : reports) {
    for (const char* metric : {"E1", "E2"}) {
      const std::string name = std::string(metric) + "_ex" + std::to_string(r.example) + "_" +
                               to_string(r.vary) + "_alpha" + fmt("%g", r.alpha) + ".dat";
      const auto path = plot_dir / name;
      std::ofstream out(path);
      if (!out) throw IoError("cannot open " + path.string() + " for writing");
      const bool space = r.vary == StudyAxis::Space;
      out << "# " << (space ? "h" : "tau") << ' ' << metric << '\n';
      for (const auto& l : r.levels) {
        out << num(space ? l.h : l.tau) << ' ' << num(metric[1] == '1' ? l.E1 : l.E2) << '\n';
      }
      if (!out) throw IoError("write failed for " + path.string());
    }
  }
}

}  // namespace fracwave
