#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "lmg/error.hpp"
#include "lmg/grid.hpp"
#include "lmg/model.hpp"
#include "lmg/parallel.hpp"
#include "lmg/quench.hpp"
#include "lmg/spectral.hpp"
#include "lmg/statics.hpp"
#include "lmg/thermodynamics.hpp"

namespace lmg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Thrown for failures writing or reading files (exit code 1).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string join_commands() {
  std::string s;
  for (const auto& c : commands()) s += (s.empty() ? "" : ", ") + c;
  return s;
}

bool single_n(const std::string& c) {
  return c == "spectrum" || c == "gap" || c == "tdf" || c == "work-sweep" || c == "spectral";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

void save_table(const io::CsvTable& t, const fs::path& path) {
  try {
    t.save(path.string());
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

json read_json(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open '" + path.string() + "'");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> list{"spectrum",  "gap",        "curvature",  "tdf",
                                             "lmin-scan", "h0-scaling", "work-sweep", "spectral"};
  return list;
}

RunConfig defaults_for(const std::string& command) {
  RunConfig c;
  c.command = command;
  c.stem = command;
  c.threads = default_thread_count();
  if (const char* dir = std::getenv("LMG_OUTPUT_DIR"); dir && *dir) c.output_dir = dir;
  c.n = {400};
  if (command == "curvature") {
    c.n = {100, 200, 300, 400, 500, 600, 700};
    c.h_min = 0.5;
    c.h_max = 1.5;
    c.h_step = kDefaultCurvatureStep;
  } else if (command == "tdf") {
    c.h_final = {0.6};
  } else if (command == "lmin-scan" || command == "work-sweep") {
    c.h_min = 0.5;
    c.h_max = 1.5;
    c.h_step = 0.01;
  } else if (command == "h0-scaling") {
    c.n = {100, 200, 300, 400};
  } else if (command == "spectral") {
    c.n = {50};
    c.h_final = {0.6, 1.0, 1.4};
  }
  return c;
}

void validate(const RunConfig& c) {
  const auto& cmds = commands();
  require(std::find(cmds.begin(), cmds.end(), c.command) != cmds.end(),
          "unknown command '" + c.command + "'; expected one of " + join_commands());
  require(!c.n.empty(), "--N needs at least one value");
  require(!single_n(c.command) || c.n.size() == 1, c.command + " takes a single --N value");
  for (int n : c.n) require(n >= 2, "--N must be at least 2 (got " + std::to_string(n) + ")");
  require(std::isfinite(c.gamma) && c.gamma >= 0.0 && c.gamma < 1.0, "--gamma must satisfy 0 <= gamma < 1");
  require(c.threads >= 1, "--threads must be at least 1");
  require(!c.stem.empty(), "--stem must not be empty");
  if (!c.plot.empty()) {
    const auto& s = io::figure_styles();
    require(std::find(s.begin(), s.end(), c.plot) != s.end(), "unknown plot style '" + c.plot + "'");
  }

  const auto finite = [](double v, const std::string& name) {
    require(std::isfinite(v), name + " must be a finite number");
  };
  const auto h_grid = [&] {
    finite(c.h_min, "grid start");
    finite(c.h_max, "grid end");
    require(c.h_step > 0.0 && std::isfinite(c.h_step), "grid step must be positive");
    require(c.h_max >= c.h_min, "grid end must not be below grid start");
  };
  const auto window = [&] {
    finite(c.t_min, "--tmin");
    finite(c.t_max, "--tmax");
    require(c.t_max > c.t_min && c.t_min >= 0.0, "time window needs 0 <= tmin < tmax");
  };
  const auto search = [&] {
    require(c.search_points >= 2, "--search-points must be at least 2");
    require(c.time_tolerance > 0.0, "--time-tol must be positive");
  };

  if (c.command == "spectrum") finite(c.h, "--h");
  if (c.command != "spectrum" && c.command != "gap" && c.command != "curvature") finite(c.h_initial, "--hi");
  if (c.command == "tdf" || c.command == "spectral") {
    require(!c.h_final.empty(), "--hf needs at least one value");
    for (double h : c.h_final) finite(h, "--hf");
  }
  if (c.command == "gap") {
    h_grid();
    require(c.levels >= 0 && c.levels <= c.n.front(), "--K must satisfy 0 <= K <= N");
  }
  if (c.command == "curvature") {
    h_grid();
    require(c.h_max - c.h_min >= 2.0 * c.h_step * (1.0 - 1e-9), "curvature needs at least 3 grid points");
  }
  if (c.command == "work-sweep") {
    h_grid();
    require(c.h_max - c.h_min >= 2.0 * c.h_step * (1.0 - 1e-9), "work sweep needs at least 3 grid points");
  }
  if (c.command == "tdf") {
    window();
    require(c.t_points >= 2, "--nt must be at least 2");
  }
  if (c.command == "lmin-scan") {
    h_grid();
    window();
    search();
  }
  if (c.command == "h0-scaling") {
    window();
    search();
    finite(c.scan_start, "--scan-start");
    finite(c.scan_end, "--scan-end");
    require(c.scan_step > 0.0 && std::isfinite(c.scan_step), "--scan-step must be positive");
    require(c.threshold > 0.0 && c.threshold < 1.0, "--threshold must lie in (0, 1)");
    require(c.sensitivity_threshold >= 0.0 && c.sensitivity_threshold < 1.0,
            "--sensitivity-threshold must lie in [0, 1)");
  }
  if (c.command == "spectral") {
    require(c.eta > 0.0 && std::isfinite(c.eta), "--eta must be positive");
    require(c.omega_points >= 2, "--omega-points must be at least 2");
    finite(c.omega_min, "--omega-min");
    finite(c.omega_max, "--omega-max");
    require(c.omega_max >= c.omega_min, "--omega-max must not be below --omega-min");
  }
}

json to_json(const RunConfig& c) {
  return json{{"command", c.command},
              {"N", c.n},
              {"gamma", c.gamma},
              {"h", c.h},
              {"h_initial", c.h_initial},
              {"h_final", c.h_final},
              {"h_min", c.h_min},
              {"h_max", c.h_max},
              {"h_step", c.h_step},
              {"levels", c.levels},
              {"t_min", c.t_min},
              {"t_max", c.t_max},
              {"t_points", c.t_points},
              {"search_points", c.search_points},
              {"time_tolerance", c.time_tolerance},
              {"threshold", c.threshold},
              {"sensitivity_threshold", c.sensitivity_threshold},
              {"scan_start", c.scan_start},
              {"scan_end", c.scan_end},
              {"scan_step", c.scan_step},
              {"eta", c.eta},
              {"omega_points", c.omega_points},
              {"omega_min", c.omega_min},
              {"omega_max", c.omega_max},
              {"dump_matrix", c.dump_matrix},
              {"output_dir", c.output_dir},
              {"stem", c.stem},
              {"plot", c.plot},
              {"threads", c.threads},
              {"deterministic", true}};
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object() || !j.contains("command") || !j["command"].is_string()) {
    throw InvalidArgument("config JSON needs a string 'command' field");
  }
  RunConfig c = defaults_for(j["command"].get<std::string>());
  try {
    const auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    get("N", c.n);
    get("gamma", c.gamma);
    get("h", c.h);
    get("h_initial", c.h_initial);
    get("h_final", c.h_final);
    get("h_min", c.h_min);
    get("h_max", c.h_max);
    get("h_step", c.h_step);
    get("levels", c.levels);
    get("t_min", c.t_min);
    get("t_max", c.t_max);
    get("t_points", c.t_points);
    get("search_points", c.search_points);
    get("time_tolerance", c.time_tolerance);
    get("threshold", c.threshold);
    get("sensitivity_threshold", c.sensitivity_threshold);
    get("scan_start", c.scan_start);
    get("scan_end", c.scan_end);
    get("scan_step", c.scan_step);
    get("eta", c.eta);
    get("omega_points", c.omega_points);
    get("omega_min", c.omega_min);
    get("omega_max", c.omega_max);
    get("dump_matrix", c.dump_matrix);
    get("output_dir", c.output_dir);
    get("stem", c.stem);
    get("plot", c.plot);
    get("threads", c.threads);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad value in config JSON: ") + e.what());
  }
  return c;
}

namespace {

TimeWindow window_of(const RunConfig& c) { return {c.t_min, c.t_max}; }
MinimumSearchOptions search_of(const RunConfig& c) { return {c.search_points, c.time_tolerance}; }

io::CsvTable run_spectrum(const RunConfig& c, io::ResultBundle& b, const fs::path& dir) {
  const ModelParams p{c.n.front(), c.h, c.gamma};
  p.validate();
  const auto h = build_hamiltonian(p);
  const auto eig = diagonalize(h);
  io::CsvTable t({"k", "E_k", "parity"});
  for (int k = 0; k < eig.size(); ++k) {
    t.add_row({static_cast<double>(k), eig.energies(k), static_cast<double>(eig.parity[static_cast<std::size_t>(k)])});
  }
  if (c.dump_matrix) {
    const auto m = h.dense();
    io::CsvTable dump;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      std::vector<double> row(static_cast<std::size_t>(m.cols()));
      for (Eigen::Index k = 0; k < m.cols(); ++k) row[static_cast<std::size_t>(k)] = m(r, k);
      dump.add_row(std::move(row));
    }
    const std::string name = c.stem + "_matrix.csv";
    save_table(dump, dir / name);
    b.metadata["outputs"]["matrix"] = name;
  }
  b.metadata["results"] = {{"ground_energy", eig.energies(0)}, {"ground_parity", eig.parity.front()}};
  return t;
}

io::CsvTable run_gap(const RunConfig& c) {
  const auto grid = arange(c.h_min, c.h_max, c.h_step);
  const auto g = gap_curve(c.n.front(), c.gamma, grid, c.levels, c.threads);
  std::vector<std::string> header{"h"};
  for (int k = 1; k <= c.levels; ++k) header.push_back("gap_" + std::to_string(k));
  io::CsvTable t(header);
  for (std::size_t i = 0; i < g.h.size(); ++i) {
    std::vector<double> row{g.h[i]};
    row.insert(row.end(), g.gaps[i].begin(), g.gaps[i].end());
    t.add_row(std::move(row));
  }
  return t;
}

io::CsvTable run_curvature(const RunConfig& c, io::ResultBundle& b) {
  const auto grid = arange(c.h_min, c.h_max, c.h_step);
  io::CsvTable t({"N", "h", "d2e"});
  json argmin = json::array();
  for (int n : c.n) {
    const auto curve = second_derivative_energy(n, c.gamma, grid, c.threads);
    std::size_t best = 0;
    for (std::size_t i = 0; i < curve.h.size(); ++i) {
      t.add_row({static_cast<double>(n), curve.h[i], curve.d2e[i]});
      if (curve.d2e[i] < curve.d2e[best]) best = i;
    }
    argmin.push_back({{"N", n}, {"h", curve.h[best]}, {"d2e", curve.d2e[best]}});
  }
  b.metadata["results"] = {{"minimum", argmin}};
  return t;
}

io::CsvTable run_tdf(const RunConfig& c) {
  const int n = c.n.front();
  const auto times = linspace(c.t_min, c.t_max, static_cast<std::size_t>(c.t_points));
  const ModelParams initial_params{n, c.h_initial, c.gamma};
  initial_params.validate();
  for (double h : c.h_final) ModelParams{n, h, c.gamma}.validate();
  const auto initial = ground_state(initial_params);

  std::vector<std::vector<double>> columns(c.h_final.size());
  parallel_for(c.h_final.size(), c.threads, [&](std::size_t k) {
    const QuenchSpec q{n, c.gamma, c.h_initial, c.h_final[k]};
    const auto post = diagonalize(build_hamiltonian(q.final_params()));
    columns[k] = fidelity_series(overlap_distribution(initial, post, q), times).values;
  });

  std::vector<std::string> header{"t"};
  if (c.h_final.size() == 1) {
    header.push_back("L");
  } else {
    for (double h : c.h_final) header.push_back("L[h_f=" + short_number(h) + "]");
  }
  io::CsvTable t(header);
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row{times[i]};
    for (const auto& col : columns) row.push_back(col[i]);
    t.add_row(std::move(row));
  }
  return t;
}

io::CsvTable run_lmin_scan(const RunConfig& c) {
  const auto fields = arange(c.h_min, c.h_max, c.h_step);
  io::CsvTable t({"N", "h_f", "L_min", "t_at_min"});
  for (int n : c.n) {
    const auto points = lmin_scan(n, c.gamma, c.h_initial, fields, window_of(c), search_of(c), c.threads);
    for (const auto& p : points) t.add_row({static_cast<double>(n), p.h_final, p.l_min, p.t_at_min});
  }
  return t;
}

io::CsvTable run_h0_scaling(const RunConfig& c, io::ResultBundle& b) {
  const FieldScan scan{c.scan_start, c.scan_end, c.scan_step};
  OrthogonalityOptions opts{window_of(c), c.threshold, search_of(c), c.threads};
  const bool sensitivity = c.sensitivity_threshold > 0.0;

  std::vector<std::string> header{"N", "h0", "L_min_at_h0", "h_dip", "L_min_dip"};
  if (sensitivity) header.push_back("h0_alt");
  io::CsvTable t(header);
  std::vector<std::pair<int, double>> found;
  json missing = json::array();
  const double nan = std::nan("");
  for (int n : c.n) {
    const auto r = orthogonality_field(n, c.gamma, c.h_initial, scan, opts);
    std::vector<double> row{static_cast<double>(n), nan, nan, nan, nan};
    if (r) {
      row = {static_cast<double>(n), r->h0, r->l_min_at_h0, r->dip_field, r->dip_l_min};
      found.emplace_back(n, r->h0);
    } else {
      missing.push_back(n);
    }
    if (sensitivity) {
      auto alt_opts = opts;
      alt_opts.threshold = c.sensitivity_threshold;
      const auto alt = orthogonality_field(n, c.gamma, c.h_initial, scan, alt_opts);
      row.push_back(alt ? alt->h0 : nan);
    }
    t.add_row(std::move(row));
  }

  json results{{"not_found", missing}};
  if (found.size() >= 3) {
    const auto fit = extrapolate_critical_field(found);
    results["fit"] = {{"model", "h0 = a + b/N + c/N^2"},
                      {"a", fit.a},
                      {"b", fit.b},
                      {"c", fit.c},
                      {"residuals", fit.residuals},
                      {"rms_residual", fit.rms_residual}};
    results["extrapolated_h0"] = fit.extrapolation();
  }
  b.metadata["results"] = results;
  return t;
}

io::CsvTable run_work_sweep(const RunConfig& c, io::ResultBundle& b) {
  const auto grid = arange(c.h_min, c.h_max, c.h_step);
  const auto s = thermo_sweep(c.n.front(), c.gamma, c.h_initial, grid, c.threads);
  io::CsvTable t({"h_f", "W", "dF", "W_irr", "dW/dh", "ddF/dh", "dWirr/dh"});
  const double nan = std::nan("");
  const std::size_t last = s.h_final.size() - 1;
  for (std::size_t i = 0; i < s.h_final.size(); ++i) {
    const bool interior = i > 0 && i < last;
    const auto& w = s.stats[i];
    t.add_row({s.h_final[i], w.mean_work, w.delta_f, w.irreversible_work, interior ? s.d_mean_work[i - 1] : nan,
               interior ? s.d_delta_f[i - 1] : nan, interior ? s.d_irreversible_work[i - 1] : nan});
  }
  double min_irr = s.stats.front().irreversible_work;
  for (const auto& w : s.stats) min_irr = std::min(min_irr, w.irreversible_work);
  b.metadata["results"] = {{"min_irreversible_work", min_irr}};
  return t;
}

io::CsvTable run_spectral(RunConfig& c, io::ResultBundle& b, const fs::path& dir) {
  const int n = c.n.front();
  const ModelParams initial_params{n, c.h_initial, c.gamma};
  initial_params.validate();
  for (double h : c.h_final) ModelParams{n, h, c.gamma}.validate();
  const auto initial = ground_state(initial_params);

  std::vector<OverlapDistribution> dists(c.h_final.size());
  parallel_for(c.h_final.size(), c.threads, [&](std::size_t k) {
    const QuenchSpec q{n, c.gamma, c.h_initial, c.h_final[k]};
    dists[k] = overlap_distribution(initial, diagonalize(build_hamiltonian(q.final_params())), q);
  });

  if (c.omega_min == c.omega_max) {
    double lo = dists.front().energies.front(), hi = lo;
    for (const auto& d : dists) {
      const auto [a, z] = std::minmax_element(d.energies.begin(), d.energies.end());
      lo = std::min(lo, *a);
      hi = std::max(hi, *z);
    }
    c.omega_min = lo - 1.0;
    c.omega_max = hi + 1.0;
  }
  const auto omega = linspace(c.omega_min, c.omega_max, static_cast<std::size_t>(c.omega_points));

  std::vector<std::vector<double>> columns(dists.size());
  parallel_for(dists.size(), c.threads,
               [&](std::size_t k) { columns[k] = spectral_function(dists[k], omega, c.eta).values; });

  std::vector<std::string> header{"omega"};
  if (dists.size() == 1) {
    header.push_back("A");
  } else {
    for (double h : c.h_final) header.push_back("A[h_f=" + short_number(h) + "]");
  }
  io::CsvTable t(header);
  for (std::size_t i = 0; i < omega.size(); ++i) {
    std::vector<double> row{omega[i]};
    for (const auto& col : columns) row.push_back(col[i]);
    t.add_row(std::move(row));
  }

  json levels = json::array();
  for (const auto& d : dists) {
    json entries = json::array();
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (d.weights[j] == 0.0) continue;
      entries.push_back({{"E", d.energies[j]}, {"p", d.weights[j]}, {"parity", d.parity[j]}});
    }
    levels.push_back({{"h_final", d.quench.h_final}, {"ground_energy_final", d.ground_energy_final}, {"levels", entries}});
  }
  const std::string name = c.stem + "_levels.json";
  write_text(dir / name, levels.dump(2) + "\n");
  b.metadata["outputs"]["levels"] = name;
  return t;
}

void write_plot(const io::ResultBundle& b, const std::string& style, const fs::path& path) {
  write_text(path, io::emit_figure(b, style));
}

}  // namespace

io::ResultBundle run(RunConfig& cfg) {
  validate(cfg);
  const auto started = std::chrono::steady_clock::now();
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.output_dir + "': " + ec.message());

  io::ResultBundle b;
  b.command = cfg.command;
  b.metadata = {{"tool", "lmg"}, {"version", kToolVersion}, {"command", cfg.command}};
  b.metadata["outputs"] = json::object();

  io::CsvTable table;
  const auto& c = cfg.command;
  if (c == "spectrum") table = run_spectrum(cfg, b, dir);
  else if (c == "gap") table = run_gap(cfg);
  else if (c == "curvature") table = run_curvature(cfg, b);
  else if (c == "tdf") table = run_tdf(cfg);
  else if (c == "lmin-scan") table = run_lmin_scan(cfg);
  else if (c == "h0-scaling") table = run_h0_scaling(cfg, b);
  else if (c == "work-sweep") table = run_work_sweep(cfg, b);
  else table = run_spectral(cfg, b, dir);

  const std::string csv_name = cfg.stem + ".csv";
  save_table(table, dir / csv_name);
  b.tables[c] = table;
  b.metadata["outputs"]["csv"] = csv_name;
  b.metadata["config"] = to_json(cfg);

  if (!cfg.plot.empty()) {
    const std::string svg_name = cfg.stem + ".svg";
    write_plot(b, cfg.plot, dir / svg_name);
    b.metadata["outputs"]["svg"] = svg_name;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  b.metadata["wall_time_seconds"] = elapsed.count();
  write_text(dir / (cfg.stem + ".json"), b.metadata.dump(2) + "\n");

  if (c == "h0-scaling" && !b.metadata["results"].contains("fit")) {
    throw NumericalError("orthogonality field found for fewer than 3 sizes; no extrapolation possible (see " +
                         cfg.stem + ".csv)");
  }
  return b;
}

namespace {

std::string usage() {
  return "usage: lmg <command> [options]\n"
         "commands: " +
         join_commands() +
         ", plot\n"
         "run 'lmg <command> --help' for the options of a command\n";
}

std::optional<std::string> find_config_flag(const std::vector<std::string>& args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

void bind_options(CLI::App& app, RunConfig& c, std::string& config_path) {
  const auto& cmd = c.command;
  app.set_help_flag("--help", "print the options of this command");
  app.add_option("--config", config_path, "rerun from a metadata JSON (explicit flags override)");
  if (single_n(cmd)) {
    app.add_option("--N", c.n, "number of spins")->expected(1);
  } else {
    app.add_option("--N", c.n, "number of spins (comma list)")->delimiter(',');
  }
  app.add_option("--gamma", c.gamma, "anisotropy, 0 <= gamma < 1");
  app.add_option("--threads", c.threads, "worker threads");
  app.add_option("--out", c.output_dir, "output directory (default $LMG_OUTPUT_DIR or .)");
  app.add_option("--stem", c.stem, "base name of output files");
  app.add_option("--plot", c.plot, "also render this figure style as SVG");

  if (cmd == "spectrum") {
    app.add_option("--h", c.h, "transverse field");
    app.add_flag("--dump-matrix", c.dump_matrix, "write the Hamiltonian matrix as CSV");
    return;
  }
  if (cmd == "gap" || cmd == "curvature") {
    app.add_option("--hmin", c.h_min, "first field of the grid");
    app.add_option("--hmax", c.h_max, "last field of the grid");
    app.add_option("--dh", c.h_step, "grid step");
    if (cmd == "gap") app.add_option("--K", c.levels, "number of excited levels");
    return;
  }
  app.add_option("--hi", c.h_initial, "initial field");
  if (cmd == "tdf" || cmd == "spectral") app.add_option("--hf", c.h_final, "final field(s), comma list")->delimiter(',');
  if (cmd == "lmin-scan" || cmd == "work-sweep") {
    app.add_option("--hfmin", c.h_min, "first final field");
    app.add_option("--hfmax", c.h_max, "last final field");
    app.add_option("--dhf", c.h_step, "final-field step");
  }
  if (cmd == "tdf" || cmd == "lmin-scan" || cmd == "h0-scaling") {
    app.add_option("--tmin", c.t_min, "start of the time window");
    app.add_option("--tmax", c.t_max, "end of the time window");
  }
  if (cmd == "tdf") app.add_option("--nt", c.t_points, "number of time samples");
  if (cmd == "lmin-scan" || cmd == "h0-scaling") {
    app.add_option("--search-points", c.search_points, "coarse grid points of the minimum search");
    app.add_option("--time-tol", c.time_tolerance, "time resolution of the minimum search");
  }
  if (cmd == "h0-scaling") {
    app.add_option("--threshold", c.threshold, "orthogonality threshold on L_min");
    app.add_option("--sensitivity-threshold", c.sensitivity_threshold,
                   "second threshold reported as h0_alt (0 disables)");
    app.add_option("--scan-start", c.scan_start, "first field of the scan");
    app.add_option("--scan-end", c.scan_end, "last field of the scan");
    app.add_option("--scan-step", c.scan_step, "scan step");
  }
  if (cmd == "spectral") {
    app.add_option("--eta", c.eta, "Lorentzian broadening");
    app.add_option("--omega-points", c.omega_points, "number of omega samples");
    app.add_option("--omega-min", c.omega_min, "omega range start (equal to --omega-max for automatic)");
    app.add_option("--omega-max", c.omega_max, "omega range end");
  }
}

// Parses `args` (program name and command already stripped) with CLI11.
// Returns an exit code if parsing ended the run (help or error).
std::optional<int> parse_args(CLI::App& app, std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "lmg " << app.get_name() << ": " << e.what() << '\n';
    return kUsageError;
  }
  return std::nullopt;
}

int run_plot(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("render a figure from an existing run", "plot");
  std::string meta_path, style, svg_path;
  app.set_help_flag("--help", "print the options of this command");
  app.add_option("--from", meta_path, "metadata JSON written by a previous run")->required();
  app.add_option("--style", style, "figure style")->required();
  app.add_option("--svg", svg_path, "output file (default <stem>_<style>.svg next to the input)");
  if (auto code = parse_args(app, {args.begin() + 1, args.end()}, out, err)) return *code;

  const fs::path meta_file(meta_path);
  const json meta = read_json(meta_file);
  if (!meta.contains("command") || !meta.contains("outputs") || !meta["outputs"].contains("csv")) {
    throw InvalidArgument("'" + meta_path + "' is not run metadata (needs command and outputs.csv)");
  }
  io::ResultBundle b;
  b.command = meta["command"].get<std::string>();
  b.metadata = meta;
  b.tables[b.command] = io::CsvTable::load((meta_file.parent_path() / meta["outputs"]["csv"].get<std::string>()).string());
  const std::string svg = io::emit_figure(b, style);
  if (svg_path.empty()) {
    svg_path = (meta_file.parent_path() / (meta_file.stem().string() + "_" + style + ".svg")).string();
  }
  write_text(svg_path, svg);
  out << svg_path << '\n';
  return kSuccess;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << usage();
    return kUsageError;
  }
  const std::string& command = args.front();
  if (command == "--help" || command == "-h" || command == "help") {
    out << usage();
    return kSuccess;
  }
  if (command == "--version") {
    out << "lmg " << kToolVersion << '\n';
    return kSuccess;
  }
  if (command == "plot") return run_plot(args, out, err);
  const auto& cmds = commands();
  if (std::find(cmds.begin(), cmds.end(), command) == cmds.end()) {
    err << "lmg: unknown command '" << command << "'; expected one of " << join_commands() << ", plot\n";
    return kUsageError;
  }

  RunConfig cfg = defaults_for(command);
  if (const auto path = find_config_flag(args)) {
    json j = read_json(*path);
    if (j.contains("config")) j = j["config"];
    cfg = config_from_json(j);
    if (cfg.command != command) {
      throw InvalidArgument("config in '" + *path + "' is for command '" + cfg.command + "', not '" + command + "'");
    }
  }
  CLI::App app("", command);
  std::string config_path;
  bind_options(app, cfg, config_path);
  if (auto code = parse_args(app, {args.begin() + 1, args.end()}, out, err)) return *code;

  const auto bundle = run(cfg);
  out << (fs::path(cfg.output_dir) / bundle.metadata["outputs"]["csv"].get<std::string>()).string() << '\n';
  return kSuccess;
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::string who = args.empty() ? "lmg" : "lmg " + args.front();
  try {
    return dispatch(args, out, err);
  } catch (const InvalidArgument& e) {
    err << who << ": " << e.what() << '\n';
    return kUsageError;
  } catch (const NumericalError& e) {
    err << who << ": numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const IoError& e) {
    err << who << ": " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::exception& e) {
    err << who << ": " << e.what() << '\n';
    return kIoFailure;
  }
}

}  // namespace lmg::cli
