#include "tms/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "tms/checks.hpp"
#include "tms/parallel.hpp"
#include "tms/snapshot.hpp"

#ifndef TMS_VERSION
#define TMS_VERSION "unknown"
#endif

namespace tms {
namespace {

class CsvFile {
 public:
  CsvFile(std::filesystem::path path, const std::string& header) : path_(std::move(path)) {
    out_.open(path_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError(path_.string(), "cannot open for writing");
    write_line(header);
  }

  void write_row(std::initializer_list<double> values) {
    std::string line;
    bool first = true;
    for (double v : values) {
      if (!first) line += ',';
      line += format_number(v);
      first = false;
    }
    write_line(line);
  }

 private:
  void write_line(const std::string& line) {
    out_ << line << '\n';
    out_.flush();
    if (!out_) throw IoError(path_.string(), "write failed");
  }

  std::filesystem::path path_;
  std::ofstream out_;
};

class FileSink final : public RunObserver {
 public:
  explicit FileSink(const std::filesystem::path& dir)
      : dir_(dir),
        norms_(dir / "norms.csv", "t,M1,M2,N1,N2,energy,margin,div_residual"),
        monitors_(dir / "monitors.csv",
                  "t,df_linf,source_l2,dH_linf,energy_bound,energy_margin,coercivity_margin") {}

  void on_norms(const NormsRecord& r) override {
    norms_.write_row({r.t, r.M1, r.M2, r.N1, r.N2, r.energy, r.energy_margin, r.divergence_residual});
    monitors_.write_row(
        {r.t, r.df_linf, r.source_l2, r.dH_linf, r.energy_bound, r.energy_margin, r.min_coercivity_margin});
  }

  void on_snapshot(long step, const FieldState& state) override {
    const auto sub = dir_ / "snapshots";
    std::error_code ec;
    std::filesystem::create_directories(sub, ec);
    if (ec) throw IoError(sub.string(), ec.message());
    char name[32];
    std::snprintf(name, sizeof name, "snap_%06ld.tmsb", step);
    write_snapshot(state, sub / name);
  }

 private:
  std::filesystem::path dir_;
  CsvFile norms_;
  CsvFile monitors_;
};

struct ManifestExtras {
  std::string status = "running";
  bool partial = true;
  std::string message;
  const EvolveResult* result = nullptr;
  double wall_time = 0.0;
};

void write_manifest(const SimConfig& config, const std::filesystem::path& dir, const ManifestExtras& x) {
  const auto path = dir / "run_manifest.txt";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << "# tms run manifest; reusable as a config (run.* keys are ignored)\n";
  out << to_text(config);
  out << "run.code_version = " << TMS_VERSION << "\n";
  out << "run.snapshot_format_version = " << kSnapshotVersion << "\n";
  out << "run.workers = " << worker_count() << "\n";
  out << "run.output_dir = " << dir.string() << "\n";
  out << "run.status = " << x.status << "\n";
  out << "run.partial = " << (x.partial ? "true" : "false") << "\n";
  if (x.result) {
    const EvolveResult& r = *x.result;
    out << "run.steps = " << r.steps << "\n";
    out << "run.dt = " << format_number(r.dt) << "\n";
    out << "run.t_reached = " << format_number(r.final_state.t) << "\n";
    if (r.status != RunStatus::kOk) {
      out << "run.offending_cell = " << r.offending_cell << "\n";
      if (r.status == RunStatus::kCoercivityLost || r.status == RunStatus::kSingularBlock) {
        const auto idx = r.final_state.grid.indices(r.offending_cell);
        const auto pos = r.final_state.grid.position(r.offending_cell);
        out << "run.offending_index =";
        for (int k = 0; k < config.n; ++k) out << (k ? ", " : " ") << idx[k];
        out << "\nrun.offending_position =";
        for (int k = 0; k < config.n; ++k) out << (k ? ", " : " ") << format_number(pos[k]);
        out << "\nrun.offending_margin = " << format_number(r.offending_margin) << "\n";
      }
    }
  }
  out << "run.wall_time_s = " << format_number(x.wall_time) << "\n";
  if (!x.message.empty()) out << "run.message = " << x.message << "\n";
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

double l2_all_fields(const GridSpec& g, const std::vector<double>& u) {
  double s = 0.0;
  const std::size_t cells = g.cells();
  for (int I = 0; I < g.q; ++I) {
    const double e = reduce_norm(g, std::span(u).subspan(static_cast<std::size_t>(I) * cells, cells), NormKind::kL2);
    s += e * e;
  }
  return std::sqrt(s);
}

}  // namespace

std::filesystem::path resolve_output_dir(const SimConfig& config) {
  if (const char* env = std::getenv(kOutputDirVariable); env && *env) return env;
  return config.output_dir;
}

FieldState initial_state(const SimConfig& config) {
  if (config.data.kind != DataKind::kCustom) return realize(config.data, config.grid());
  FieldState s = read_snapshot(config.data_file);
  if (!(s.grid == config.grid())) throw ValidationError("data_file", "snapshot grid does not match n, q, L, N");
  s.t = 0.0;
  return s;
}

DriverOptions driver_options(const SimConfig& c) {
  DriverOptions o;
  o.t_final = c.t_final;
  o.cfl = c.cfl;
  o.diag_cadence = c.diag_cadence;
  o.snapshot_cadence = c.snapshot_cadence;
  o.engine = c.engine();
  return o;
}

EvolveRun run_evolve(const SimConfig& config, std::ostream& log) {
  EvolveRun run;
  run.output_dir = resolve_output_dir(config);
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  ManifestExtras extras;
  try {
    std::error_code ec;
    std::filesystem::create_directories(run.output_dir, ec);
    if (ec) throw IoError(run.output_dir.string(), ec.message());
    write_manifest(config, run.output_dir, extras);

    const FieldState data = initial_state(config);
    FileSink sink(run.output_dir);
    run.result = evolve(data, driver_options(config), &sink);

    extras.result = &run.result;
    extras.status = to_string(run.result.status);
    extras.partial = false;
    extras.message = run.result.message;
    extras.wall_time = elapsed();
    write_manifest(config, run.output_dir, extras);
    switch (run.result.status) {
      case RunStatus::kOk: run.exit_code = 0; break;
      case RunStatus::kCoercivityLost: run.exit_code = 2; break;
      default: run.exit_code = 1; break;
    }
    log << "status " << extras.status << " after " << run.result.steps << " steps, t = "
        << format_number(run.result.final_state.t) << "\n";
    if (run.result.status != RunStatus::kOk) log << run.result.message << "\n";
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    extras.status = "error";
    extras.partial = true;
    extras.message = e.what();
    extras.wall_time = elapsed();
    try {
      write_manifest(config, run.output_dir, extras);
    } catch (const Error&) {
      log << "error: could not write the run manifest either\n";
    }
    run.exit_code = 1;
  }
  return run;
}

int run_check(const std::string& suite, std::uint64_t seed, std::ostream& out) {
  const auto results = run_suite(suite, seed);
  bool all = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << std::setprecision(6) << r.value;
    if (!r.detail.empty())
      out << " (" << r.detail << ")";
    else
      out << " (threshold " << r.threshold << ")";
    out << "\n";
    all = all && r.passed;
  }
  out << suite << ": " << (all ? "all checks passed" : "FAILED") << "\n";
  return all ? 0 : 1;
}

ConvergenceReport run_convergence(const SimConfig& config, int refinements, std::ostream& out) {
  if (refinements != 2 && refinements != 3) throw ValidationError("refinements", "must be 2 or 3");
  ConvergenceReport report;
  const bool null_wave = config.data.kind == DataKind::kNullWave;
  const bool plane = config.data.kind == DataKind::kLinearPlane;
  report.mode = null_wave || plane ? "exact" : "self";

  std::vector<FieldState> finals;
  for (int l = 0; l < refinements; ++l) {
    SimConfig c = config;
    c.N = config.N << l;
    c.diag_cadence = 1 << 30;
    validate(c);
    const EvolveResult r = evolve(initial_state(c), driver_options(c));
    if (r.status != RunStatus::kOk)
      throw Error("run at N = " + std::to_string(c.N) + " ended early: " + r.message);
    report.points.push_back(c.N);
    report.residuals.push_back(r.records.back().divergence_residual);
    finals.push_back(r.final_state);
  }

  if (report.mode == "exact") {
    for (const auto& s : finals) {
      std::vector<double> diff(s.f.size());
      if (null_wave) {
        const FieldState ex = null_wave_exact(config.data, s.grid, s.t);
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = s.f[i] - ex.f[i];
      } else {
        const FieldState ex0 = realize(config.data, s.grid);
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = s.f[i] - (ex0.f[i] + ex0.v[i] * s.t);
      }
      report.errors.push_back(l2_all_fields(s.grid, diff));
    }
    report.exact_to_roundoff =
        std::all_of(report.errors.begin(), report.errors.end(), [](double e) { return e < 1e-12; });
  } else {
    const GridSpec coarse = finals[0].grid;
    const std::size_t cells = coarse.cells();
    auto sampled = [&](const FieldState& s) {
      std::vector<double> u(cells * static_cast<std::size_t>(coarse.q));
      const int factor = s.grid.points / coarse.points;
      for (int I = 0; I < coarse.q; ++I)
        for (std::size_t c = 0; c < cells; ++c) {
          auto idx = coarse.indices(c);
          for (int k = 0; k < coarse.n; ++k) idx[k] *= factor;
          u[static_cast<std::size_t>(I) * cells + c] = s.f[static_cast<std::size_t>(I) * s.grid.cells() + s.grid.flat(idx)];
        }
      return u;
    };
    for (int l = 0; l + 1 < refinements; ++l) {
      const auto a = sampled(finals[l]);
      const auto b = sampled(finals[l + 1]);
      std::vector<double> diff(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
      report.errors.push_back(l2_all_fields(coarse, diff));
    }
  }
  if (!report.exact_to_roundoff)
    for (std::size_t i = 0; i + 1 < report.errors.size(); ++i)
      report.orders.push_back(std::log2(report.errors[i] / report.errors[i + 1]));
  for (std::size_t i = 0; i + 1 < report.residuals.size(); ++i)
    report.residual_orders.push_back(std::log2(report.residuals[i] / report.residuals[i + 1]));

  out << "convergence (" << report.mode << ")" << (report.exact_to_roundoff ? " exact to round-off" : "") << "\n";
  out << "N,error,divergence_residual\n";
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    out << report.points[i] << ",";
    if (report.mode == "exact")
      out << format_number(report.errors[i]);
    else if (i < report.errors.size())
      out << format_number(report.errors[i]);
    else
      out << "-";
    out << "," << format_number(report.residuals[i]) << "\n";
  }
  for (double o : report.orders) out << "observed order (solution): " << format_number(o) << "\n";
  for (double o : report.residual_orders) out << "observed order (residual): " << format_number(o) << "\n";
  return report;
}

std::pair<double, double> decay_window(int n) {
  if (n == 3) return {-1.15, -0.85};
  if (n == 2) return {-0.60, -0.40};
  const double target = -(n - 1) / 2.0;
  return {target - 0.1, target + 0.1};
}

namespace {

DecayReport fit_series(const std::vector<double>& t, const std::vector<double>& n1, const std::vector<double>* df,
                       int n, std::ostream& out) {
  if (t.empty()) throw DegenerateSeries("empty series");
  DecayReport rep;
  rep.t_hi = t.back();
  rep.t_lo = rep.t_hi / 4.0;
  rep.target = -(n - 1) / 2.0;
  rep.N1 = power_law_fit(t, n1, rep.t_lo, rep.t_hi);
  const auto [lo, hi] = decay_window(n);
  rep.verdict = rep.N1.exponent >= lo && rep.N1.exponent <= hi;
  out << "fit window [" << format_number(rep.t_lo) << ", " << format_number(rep.t_hi) << "], "
      << rep.N1.samples << " samples\n";
  out << "N1 exponent " << format_number(rep.N1.exponent) << " +- " << format_number(rep.N1.half_width)
      << " (95%), target " << format_number(rep.target) << ", accepted [" << lo << ", " << hi << "]: "
      << (rep.verdict ? "PASS" : "FAIL") << "\n";
  if (df) {
    rep.has_df = true;
    rep.df = power_law_fit(t, *df, rep.t_lo, rep.t_hi);
    out << "sup|df| exponent " << format_number(rep.df.exponent) << " +- " << format_number(rep.df.half_width)
        << " (95%)\n";
  }
  return rep;
}

}  // namespace

DecayReport run_decay(const SimConfig& config, std::ostream& out, int* exit_code) {
  if (config.t_final < 40.0) throw ValidationError("t_final", "decay fits need t_final >= 40");
  const EvolveRun run = run_evolve(config, out);
  if (exit_code) *exit_code = run.exit_code;
  if (run.exit_code != 0) return {};
  std::vector<double> t, n1, df;
  for (const auto& r : run.result.records) {
    t.push_back(r.t);
    n1.push_back(r.N1);
    df.push_back(r.df_linf);
  }
  return fit_series(t, n1, &df, config.n, out);
}

DecayReport fit_norms_csv(const std::filesystem::path& csv, int n, std::ostream& out) {
  const auto cols = read_csv_columns(csv, {"t", "N1"});
  return fit_series(cols[0], cols[1], nullptr, n, out);
}

std::vector<std::vector<double>> read_csv_columns(const std::filesystem::path& csv,
                                                  const std::vector<std::string>& names) {
  std::ifstream in(csv);
  if (!in) throw IoError(csv.string(), "cannot open for reading");
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\r");
      const auto e = cell.find_last_not_of(" \t\r");
      cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw IoError(csv.string(), "empty file");
  const auto header = split(line);
  std::vector<std::size_t> index;
  for (const auto& name : names) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw IoError(csv.string(), "missing column '" + name + "'");
    index.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  std::vector<std::vector<double>> cols(names.size());
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    for (std::size_t k = 0; k < index.size(); ++k) {
      if (index[k] >= cells.size()) throw ParseError(row, "short row in " + csv.string());
      try {
        std::size_t used = 0;
        cols[k].push_back(std::stod(cells[index[k]], &used));
      } catch (const std::exception&) {
        throw ParseError(row, "bad number in " + csv.string());
      }
    }
  }
  return cols;
}

}  // namespace tms
