#include "stap/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

namespace stap {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry> keys;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

template <typename T>
std::optional<T> parse_number(const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return value;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_double(values[i]);
  }
  return out;
}

// Reads one section, remembering which keys were consumed.
class Reader {
 public:
  Reader(const std::string& source, std::string name, const Section* section)
      : source_(source), name_(std::move(name)), section_(section) {}

  [[noreturn]] void fail(const Entry& entry, const std::string& message) const {
    throw ConfigError(source_, entry.line, message + " (key '" + name_ + "." + key_of(entry) + "')");
  }

  void require(const std::string& key) const {
    if (!section_ || !section_->keys.count(key)) {
      throw ConfigError(source_ + ": missing required key '" + key + "' in [" + name_ + "]");
    }
  }

  std::optional<Entry> take(const std::string& key) {
    if (!section_) return std::nullopt;
    auto it = section_->keys.find(key);
    if (it == section_->keys.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  void real(const std::string& key, double& out, const std::function<bool(double)>& ok = {},
            const char* rule = nullptr) {
    if (auto e = take(key)) {
      auto v = parse_number<double>(e->value);
      if (!v) fail(*e, "'" + e->value + "' is not a number");
      if (ok && !ok(*v)) fail(*e, std::string("value must be ") + rule);
      out = *v;
    }
  }

  template <typename Int>
  void integer(const std::string& key, Int& out, Int min_value) {
    if (auto e = take(key)) {
      auto v = parse_number<Int>(e->value);
      if (!v) fail(*e, "'" + e->value + "' is not an integer");
      if (*v < min_value) fail(*e, "value must be >= " + std::to_string(min_value));
      out = *v;
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (auto e = take(key)) {
      if (e->value == "true") {
        out = true;
      } else if (e->value == "false") {
        out = false;
      } else {
        fail(*e, "expected true or false");
      }
    }
  }

  void real_list(const std::string& key, std::vector<double>& out) {
    if (auto e = take(key)) {
      std::vector<double> values;
      for (const auto& item : split_list(e->value)) {
        auto v = parse_number<double>(item);
        if (!v) fail(*e, "'" + item + "' is not a number");
        values.push_back(*v);
      }
      if (values.empty()) fail(*e, "list is empty");
      out = std::move(values);
    }
  }

  void finish() const {
    if (!section_) return;
    for (const auto& [key, entry] : section_->keys) {
      if (!used_.count(key)) throw ConfigError(source_, entry.line, "unknown key '" + key + "' in [" + name_ + "]");
    }
  }

 private:
  std::string key_of(const Entry& entry) const {
    for (const auto& [k, e] : section_->keys) {
      if (e.line == entry.line) return k;
    }
    return "?";
  }

  const std::string& source_;
  std::string name_;
  const Section* section_;
  std::set<std::string> used_;
};

std::map<std::string, Section> tokenize(const std::string& text, const std::string& source) {
  std::map<std::string, Section> sections;
  std::istringstream in(text);
  std::string raw;
  Section* current = nullptr;
  std::string current_name;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto comment = raw.find_first_of("#;");
    const std::string line = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, line_no, "unterminated section header");
      current_name = trim(line.substr(1, line.size() - 2));
      if (current_name.empty()) throw ConfigError(source, line_no, "empty section name");
      if (sections.count(current_name)) {
        throw ConfigError(source, line_no, "section [" + current_name + "] appears twice");
      }
      current = &sections[current_name];
      current->line = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line_no, "expected 'key = value'");
    if (!current) throw ConfigError(source, line_no, "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source, line_no, "missing key before '='");
    if (value.empty()) throw ConfigError(source, line_no, "missing value for key '" + key + "'");
    if (!current->keys.emplace(key, Entry{value, line_no}).second) {
      throw ConfigError(source, line_no, "key '" + key + "' repeated in [" + current_name + "]");
    }
  }
  return sections;
}

const Section* find(const std::map<std::string, Section>& sections, const std::string& name) {
  auto it = sections.find(name);
  return it == sections.end() ? nullptr : &it->second;
}

auto positive = [](double v) { return v > 0; };
auto non_negative = [](double v) { return v >= 0; };

void read_sparse(Reader& r, SparseSolverConfig& cfg, bool with_p) {
  if (with_p) r.real("p", cfg.p, [](double v) { return v > 0 && v <= 1; }, "in (0, 1]");
  r.real("kappa", cfg.kappa, non_negative, ">= 0");
  r.integer("max_iter", cfg.max_iter, 1);
  r.real("rel_change_tol", cfg.rel_change_tol, positive, "> 0");
  r.real("prune_threshold", cfg.prune_threshold, [](double v) { return v > 0 && v < 1; }, "in (0, 1)");
  r.real("cg_tol", cfg.cg_tol, positive, "> 0");
  if (auto e = r.take("inner_solver")) {
    if (e->value == "cg") {
      cfg.inner_solver = InnerSolver::ConjugateGradient;
    } else if (e->value == "cholesky") {
      cfg.inner_solver = InnerSolver::Cholesky;
    } else {
      r.fail(*e, "expected cg or cholesky");
    }
  }
}

void read_method(Reader& r, MethodSpec& spec) {
  if (spec.method == Method::Clairvoyant) return;
  r.integer("snapshots", spec.snapshots, 1L);
  switch (spec.method) {
    case Method::Jdl:
      r.real("loading", spec.loading, non_negative, ">= 0");
      r.integer("beams", spec.jdl_beams, 1);
      r.integer("dopplers", spec.jdl_dopplers, 1);
      break;
    case Method::Stmb:
      r.real("loading", spec.loading, non_negative, ">= 0");
      r.integer("doppler_arm", spec.stmb_doppler_arm, 0);
      r.integer("beam_arm", spec.stmb_beam_arm, 0);
      break;
    case Method::Acr:
      r.real("loading", spec.loading, non_negative, ">= 0");
      r.integer("cells", spec.acr_cells, 1);
      break;
    case Method::Scbds:
      read_sparse(r, spec.sparse, true);
      break;
    case Method::L1Gsc:
      read_sparse(r, spec.sparse, false);
      break;
    case Method::Clairvoyant:
      break;
  }
}

std::string sparse_lines(const SparseSolverConfig& cfg, bool with_p) {
  std::string out;
  if (with_p) out += "p = " + format_double(cfg.p) + "\n";
  out += "kappa = " + format_double(cfg.kappa) + "\n";
  out += "max_iter = " + std::to_string(cfg.max_iter) + "\n";
  out += "rel_change_tol = " + format_double(cfg.rel_change_tol) + "\n";
  out += "prune_threshold = " + format_double(cfg.prune_threshold) + "\n";
  out += std::string("inner_solver = ") + (cfg.inner_solver == InnerSolver::Cholesky ? "cholesky" : "cg") + "\n";
  out += "cg_tol = " + format_double(cfg.cg_tol) + "\n";
  return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

RunConfig::RunConfig() {
  for (int i = 0; i < 20; ++i) doppler_grid.push_back((i - 10) / 20.0);
  for (Method m : {Method::Clairvoyant, Method::Jdl, Method::Stmb, Method::Acr, Method::Scbds, Method::L1Gsc}) {
    MethodSpec spec;
    spec.method = m;
    if (m == Method::L1Gsc) spec.snapshots = 60;
    algorithms[m] = spec;
  }
}

ExperimentSpec RunConfig::experiment(SweepKind kind) const {
  ExperimentSpec spec;
  spec.scenario = scenario;
  spec.target_fs = target_fs;
  spec.target_fd = target_fd;
  for (Method m : methods) spec.methods.push_back(algorithm(m));
  spec.kind = kind;
  spec.abscissa = kind == SweepKind::Snapshots ? snapshot_grid : doppler_grid;
  spec.num_trials = trials;
  spec.master_seed = seed;
  spec.num_patches = clutter_patches;
  return spec;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  const auto sections = tokenize(text, source);
  RunConfig cfg;

  static const std::set<std::string> known{"scenario", "array_error", "target", "run", "sweep", "weight_map"};
  for (const auto& [name, section] : sections) {
    if (known.count(name)) continue;
    if (name.rfind("algorithms.", 0) == 0 && method_from_string(name.substr(11))) continue;
    throw ConfigError(source, section.line, "unknown section [" + name + "]");
  }

  {
    const Section* sec = find(sections, "scenario");
    if (!sec) throw ConfigError(source + ": missing required section [scenario]");
    Reader r(source, "scenario", sec);
    for (const char* key : {"num_elements", "num_pulses", "carrier_freq", "prf", "platform_velocity", "cnr_db"}) {
      r.require(key);
    }
    RadarConfig& sc = cfg.scenario;
    r.integer("num_elements", sc.num_elements, 1);
    r.integer("num_pulses", sc.num_pulses, 1);
    r.real("carrier_freq", sc.carrier_freq, positive, "> 0");
    r.real("prf", sc.prf, positive, "> 0");
    double spacing = 0;
    if (sec->keys.count("element_spacing")) {
      r.real("element_spacing", spacing, positive, "> 0");
      sc.element_spacing = spacing;
    }
    r.real("platform_velocity", sc.platform_velocity, [](double v) { return std::isfinite(v); }, "finite");
    r.real("platform_altitude", sc.platform_altitude, non_negative, ">= 0");
    r.real("cnr_db", sc.cnr_db, [](double v) { return v < std::numeric_limits<double>::infinity(); },
           "finite or -inf");
    r.real("noise_power", sc.noise_power, positive, "> 0");
    r.integer("clutter_patches", cfg.clutter_patches, 1);
    r.finish();
  }
  if (const Section* sec = find(sections, "array_error")) {
    Reader r(source, "array_error", sec);
    bool enabled = true;
    ArrayErrorModel model;
    r.boolean("enabled", enabled);
    r.real("gain_std", model.gain_std, non_negative, ">= 0");
    r.real("phase_std", model.phase_std, non_negative, ">= 0");
    r.integer("seed", model.seed, std::uint64_t{0});
    r.finish();
    if (enabled) cfg.scenario.array_error = model;
  }
  {
    Reader r(source, "target", find(sections, "target"));
    r.real("fs", cfg.target_fs, [](double v) { return std::isfinite(v); }, "finite");
    r.real("fd", cfg.target_fd, [](double v) { return std::isfinite(v); }, "finite");
    r.finish();
  }
  {
    Reader r(source, "run", find(sections, "run"));
    r.integer("seed", cfg.seed, std::uint64_t{0});
    r.integer("trials", cfg.trials, 1);
    if (auto e = r.take("methods")) {
      std::vector<Method> methods;
      for (const auto& name : split_list(e->value)) {
        auto m = method_from_string(name);
        if (!m) r.fail(*e, "unknown method '" + name + "'");
        if (std::find(methods.begin(), methods.end(), *m) != methods.end()) r.fail(*e, "method '" + name + "' repeated");
        methods.push_back(*m);
      }
      cfg.methods = std::move(methods);
    }
    r.finish();
  }
  {
    Reader r(source, "sweep", find(sections, "sweep"));
    r.real_list("snapshots", cfg.snapshot_grid);
    r.real_list("dopplers", cfg.doppler_grid);
    r.finish();
  }
  for (auto& [method, spec] : cfg.algorithms) {
    const std::string name = "algorithms." + std::string(to_string(method));
    Reader r(source, name, find(sections, name));
    read_method(r, spec);
    r.finish();
  }
  {
    Reader r(source, "weight_map", find(sections, "weight_map"));
    r.integer("snapshots", cfg.weight_map_snapshots, 1L);
    r.finish();
  }

  try {
    cfg.scenario.validate();
    cfg.experiment(SweepKind::Snapshots).validate();
    cfg.experiment(SweepKind::Doppler).validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot read configuration file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string render_config(const RunConfig& cfg) {
  const RadarConfig& sc = cfg.scenario;
  std::string out;
  out += "[scenario]\n";
  out += "num_elements = " + std::to_string(sc.num_elements) + "\n";
  out += "num_pulses = " + std::to_string(sc.num_pulses) + "\n";
  out += "carrier_freq = " + format_double(sc.carrier_freq) + "\n";
  out += "prf = " + format_double(sc.prf) + "\n";
  if (sc.element_spacing) out += "element_spacing = " + format_double(*sc.element_spacing) + "\n";
  out += "platform_velocity = " + format_double(sc.platform_velocity) + "\n";
  out += "platform_altitude = " + format_double(sc.platform_altitude) + "\n";
  out += "cnr_db = " + format_double(sc.cnr_db) + "\n";
  out += "noise_power = " + format_double(sc.noise_power) + "\n";
  out += "clutter_patches = " + std::to_string(cfg.clutter_patches) + "\n";

  const ArrayErrorModel err = sc.array_error.value_or(ArrayErrorModel{});
  out += "\n[array_error]\n";
  out += std::string("enabled = ") + (sc.array_error ? "true" : "false") + "\n";
  out += "gain_std = " + format_double(err.gain_std) + "\n";
  out += "phase_std = " + format_double(err.phase_std) + "\n";
  out += "seed = " + std::to_string(err.seed) + "\n";

  out += "\n[target]\n";
  out += "fs = " + format_double(cfg.target_fs) + "\n";
  out += "fd = " + format_double(cfg.target_fd) + "\n";

  out += "\n[run]\n";
  out += "seed = " + std::to_string(cfg.seed) + "\n";
  out += "trials = " + std::to_string(cfg.trials) + "\n";
  out += "methods = ";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    if (i) out += ", ";
    out += to_string(cfg.methods[i]);
  }
  out += "\n";

  out += "\n[sweep]\n";
  out += "snapshots = " + join(cfg.snapshot_grid) + "\n";
  out += "dopplers = " + join(cfg.doppler_grid) + "\n";

  for (const auto& [method, spec] : cfg.algorithms) {
    if (method == Method::Clairvoyant) continue;
    out += "\n[algorithms." + std::string(to_string(method)) + "]\n";
    out += "snapshots = " + std::to_string(spec.snapshots) + "\n";
    switch (method) {
      case Method::Jdl:
        out += "loading = " + format_double(spec.loading) + "\n";
        out += "beams = " + std::to_string(spec.jdl_beams) + "\n";
        out += "dopplers = " + std::to_string(spec.jdl_dopplers) + "\n";
        break;
      case Method::Stmb:
        out += "loading = " + format_double(spec.loading) + "\n";
        out += "doppler_arm = " + std::to_string(spec.stmb_doppler_arm) + "\n";
        out += "beam_arm = " + std::to_string(spec.stmb_beam_arm) + "\n";
        break;
      case Method::Acr:
        out += "loading = " + format_double(spec.loading) + "\n";
        out += "cells = " + std::to_string(spec.acr_cells) + "\n";
        break;
      case Method::Scbds:
        out += sparse_lines(spec.sparse, true);
        break;
      case Method::L1Gsc:
        out += sparse_lines(spec.sparse, false);
        break;
      case Method::Clairvoyant:
        break;
    }
  }

  out += "\n[weight_map]\n";
  out += "snapshots = " + std::to_string(cfg.weight_map_snapshots) + "\n";
  return out;
}

}  // namespace stap
