#include "stap/commands.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#ifndef STAP_VERSION
#define STAP_VERSION "0.0.0"
#endif

namespace stap {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

using Body = std::function<void(const RunConfig&, Json& manifest)>;

int run_command(const std::string& name, const CommandOptions& options, std::ostream& out, std::ostream& err,
                const Body& body) {
  const auto started = std::chrono::steady_clock::now();
  RunConfig cfg;
  try {
    cfg = load_config(options.config_path);
    if (options.seed) cfg.seed = *options.seed;
    if (options.trials) {
      if (*options.trials < 1) throw ConfigError("--trials must be >= 1");
      cfg.trials = *options.trials;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    fs::create_directories(options.out_dir);
    if (!fs::is_directory(options.out_dir)) throw IoError(options.out_dir.string() + " is not a directory");
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }

  Json manifest;
  manifest["tool"] = "stap";
  manifest["version"] = tool_version();
  manifest["command"] = name;
  manifest["master_seed"] = cfg.seed;
  manifest["resolved_config"] = render_config(cfg);

  int code = kExitOk;
  try {
    body(cfg, manifest);
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    code = kExitNumerical;
  } catch (const SingularMatrixError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }

  try {
    write_file(options.out_dir / "resolved.ini", render_config(cfg));
    write_file(options.out_dir / "manifest.json", manifest.dump(2) + "\n");
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    Json timing;
    timing["command"] = name;
    timing["wall_clock_seconds"] = seconds;
    write_file(options.out_dir / "timing.json", timing.dump(2) + "\n");
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  if (code == kExitOk) out << name << ": wrote " << options.out_dir.string() << "\n";
  return code;
}

}  // namespace

std::string_view tool_version() { return STAP_VERSION; }

std::string format_csv_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

int cmd_scenario_report(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return run_command("scenario-report", options, out, err, [&](const RunConfig& cfg, Json& manifest) {
    const RadarConfig& sc = cfg.scenario;
    const ClairvoyantCovariance cov = build_clairvoyant_covariance(sc, cfg.clutter_patches);
    const double beta = clutter_ridge_slope(sc);
    const double nm = sc.dimension();
    const double measured = (cov.matrix.trace().real() - nm * sc.noise_power) / (nm * sc.noise_power);
    const double configured = sc.cnr_linear();
    const double cnr_error = configured > 0 ? std::abs(measured - configured) / configured : std::abs(measured);
    const int rank = clutter_rank(cov.eigenvalues, sc.noise_power);
    const double brennan = configured > 0 ? sc.num_elements + beta * (sc.num_pulses - 1) : 0.0;

    std::ostringstream report;
    auto line = [&](const std::string& key, const std::string& value) { report << key << " = " << value << "\n"; };
    line("num_elements", std::to_string(sc.num_elements));
    line("num_pulses", std::to_string(sc.num_pulses));
    line("wavelength_m", format_csv_number(sc.wavelength()));
    line("element_spacing_m", format_csv_number(sc.spacing()));
    line("ridge_slope_beta", format_csv_number(beta));
    line("clutter_patches", std::to_string(cfg.clutter_patches));
    line("brennan_rank", format_csv_number(brennan));
    line("clutter_rank_estimate", std::to_string(rank));
    line("clutter_rank_threshold", "10 * noise_power");
    line("cnr_db_configured", format_csv_number(sc.cnr_db));
    line("cnr_linear_measured", format_csv_number(measured));
    line("cnr_relative_error", format_csv_number(cnr_error));
    line("min_eigenvalue", format_csv_number(cov.eigenvalues(cov.eigenvalues.size() - 1)));
    line("max_eigenvalue", format_csv_number(cov.eigenvalues(0)));
    for (const auto& w : cov.warnings) line("warning", w);
    write_file(options.out_dir / "scenario_report.txt", report.str());

    std::string csv = "index,eigenvalue,eigenvalue_to_noise_db\n";
    for (long i = 0; i < cov.eigenvalues.size(); ++i) {
      const double ev = cov.eigenvalues(i);
      csv += std::to_string(i) + "," + format_csv_number(ev) + "," +
             format_csv_number(10.0 * std::log10(ev / sc.noise_power)) + "\n";
    }
    write_file(options.out_dir / "eigenvalues.csv", csv);

    manifest["outputs"] = {"scenario_report.txt", "eigenvalues.csv"};
    manifest["clutter_rank_estimate"] = rank;
  });
}

int cmd_sweep(const CommandOptions& options, SweepKind kind, std::ostream& out, std::ostream& err) {
  const std::string kind_name(to_string(kind));
  return run_command("sweep", options, out, err, [&](const RunConfig& cfg, Json& manifest) {
    const ExperimentSpec spec = cfg.experiment(kind);
    const SweepResult result = run_sweep(spec);

    std::string csv = "abscissa,method,mean_scnr_loss_db,std_db,trials,failures\n";
    std::vector<std::string> empty_cells;
    for (std::size_t a = 0; a < result.abscissa.size(); ++a) {
      for (const auto& curve : result.curves) {
        csv += format_csv_number(result.abscissa[a]) + "," + std::string(to_string(curve.method)) + "," +
               format_csv_number(curve.mean_db[a]) + "," + format_csv_number(curve.std_db[a]) + "," +
               std::to_string(curve.trials[a]) + "," + std::to_string(curve.failures[a]) + "\n";
        if (curve.trials[a] == 0) {
          empty_cells.push_back(std::string(to_string(curve.method)) + " at " + format_csv_number(result.abscissa[a]));
        }
      }
    }
    const std::string file = "sweep_" + kind_name + ".csv";
    write_file(options.out_dir / file, csv);

    manifest["sweep_kind"] = kind_name;
    manifest["trials"] = result.num_trials;
    manifest["trial_seeds"] = result.seeds;
    Json failures = Json::object();
    for (const auto& curve : result.curves) {
      int total = 0;
      for (int f : curve.failures) total += f;
      failures[std::string(to_string(curve.method))] = total;
    }
    manifest["failures"] = failures;
    manifest["outputs"] = {file};

    if (!empty_cells.empty()) {
      std::string msg = "every trial failed for";
      for (const auto& c : empty_cells) msg += " [" + c + "]";
      throw NumericalFailure(msg);
    }
  });
}

int cmd_weight_map(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return run_command("weight-map", options, out, err, [&](const RunConfig& cfg, Json& manifest) {
    const RadarConfig& sc = cfg.scenario;
    const ClairvoyantCovariance cov = build_clairvoyant_covariance(sc, cfg.clutter_patches);
    const BeamDopplerBasis basis(cfg.target_fs, cfg.target_fd, sc.num_elements, sc.num_pulses);
    const std::uint64_t seed = trial_seed(cfg.seed, 0);
    const SnapshotBatch batch = generate_snapshots(cov, cfg.weight_map_snapshots, seed);
    const DesignResult design = scbds_design(batch.data, basis, cfg.algorithm(Method::Scbds).sparse);
    const WeightMap map = export_weight_map(design.weights, basis);

    std::string csv;
    for (int m = 0; m < sc.num_elements; ++m) csv += (m ? "," : "") + std::to_string(m);
    csv += "\n";
    for (int k = 0; k < sc.num_pulses; ++k) {
      for (int m = 0; m < sc.num_elements; ++m) {
        const bool target = k == map.target.doppler && m == map.target.beam;
        csv += (m ? "," : "") + (target ? std::string("-1") : format_csv_number(map.grid(k, m)));
      }
      csv += "\n";
    }
    write_file(options.out_dir / "weight_map.csv", csv);

    const double loss = scnr_loss_db(design.weights.full, basis.target_steering(), cov.matrix, sc.noise_power);
    manifest["snapshots"] = cfg.weight_map_snapshots;
    manifest["snapshot_seed"] = seed;
    manifest["nonzero_cells"] = design.weights.support.size();
    manifest["significant_fraction"] = significant_fraction(design.weights.reduced);
    manifest["max_amplitude"] = map.max_amplitude;
    manifest["scnr_loss_db"] = loss;
    manifest["iterations"] = design.diagnostics.iterations_used;
    manifest["converged"] = design.diagnostics.converged;
    manifest["outputs"] = {"weight_map.csv"};
  });
}

}  // namespace stap
