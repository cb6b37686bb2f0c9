#include "memrx/experiment.hpp"

#include "memrx/io.hpp"
#include "memrx/measurement.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

namespace memrx {

using ordered_json = nlohmann::ordered_json;

namespace {

Vec3 parse_vec3(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3)
    throw std::invalid_argument("config: expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

double parse_snr(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("config: noise_snr_db must be a number or \"inf\"");
  }
  return j.get<double>();
}

GeometryConfig parse_geometry(const nlohmann::json& j) {
  GeometryConfig cfg = default_geometry_config();
  if (j.contains("preset")) {
    const auto p = j["preset"].get<std::string>();
    if (p == "full") cfg = default_geometry_config();
    else if (p == "desk") cfg = desk_scale_geometry_config();
    else throw std::invalid_argument("config: unknown geometry preset: " + p);
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (g.contains("half_width")) cfg.grid.half_width = g["half_width"].get<double>();
    if (g.contains("n_per_side")) cfg.grid.n_per_side = g["n_per_side"].get<int>();
  }
  if (j.contains("sensor_layers")) {
    cfg.sensor_layers.clear();
    for (const auto& lj : j["sensor_layers"]) {
      SensorLayerConfig layer;
      if (lj.contains("y")) layer.y = lj["y"].get<double>();
      if (lj.contains("count")) layer.count = lj["count"].get<int>();
      if (lj.contains("x_extent")) layer.x_extent = lj["x_extent"].get<double>();
      if (lj.contains("direction")) layer.direction = parse_vec3(lj["direction"]);
      cfg.sensor_layers.push_back(layer);
    }
  }
  if (j.contains("coils")) {
    const auto& c = j["coils"];
    if (c.contains("count")) cfg.coils.count = c["count"].get<int>();
    if (c.contains("standoff")) cfg.coils.standoff = c["standoff"].get<double>();
    if (c.contains("radius")) cfg.coils.radius = c["radius"].get<double>();
    if (c.contains("segments")) cfg.coils.n_segments = c["segments"].get<int>();
    if (c.contains("current")) cfg.coils.current = c["current"].get<double>();
    if (c.contains("normal")) cfg.coils.normal = parse_vec3(c["normal"]);
  }
  return cfg;
}

ordered_json vec3_json(const Vec3& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

ordered_json geometry_echo(const GeometryConfig& cfg) {
  ordered_json j;
  j["grid"] = {{"half_width", cfg.grid.half_width}, {"n_per_side", cfg.grid.n_per_side}};
  j["sensor_layers"] = ordered_json::array();
  for (const auto& layer : cfg.sensor_layers)
    j["sensor_layers"].push_back({{"y", layer.y},
                                  {"count", layer.count},
                                  {"x_extent", layer.x_extent},
                                  {"direction", vec3_json(layer.direction)}});
  j["coils"] = {{"count", cfg.coils.count},
                {"standoff", cfg.coils.standoff},
                {"radius", cfg.coils.radius},
                {"segments", cfg.coils.n_segments},
                {"current", cfg.coils.current},
                {"normal", vec3_json(cfg.coils.normal)}};
  return j;
}

ordered_json config_echo(const ExperimentConfig& cfg) {
  ordered_json j;
  j["geometry"] = geometry_echo(cfg.geometry);
  j["phantom"] = to_string(cfg.phantom);
  if (std::isinf(cfg.noise_snr_db)) j["noise_snr_db"] = "inf";
  else j["noise_snr_db"] = cfg.noise_snr_db;
  if (cfg.sensing) {
    ordered_json s;
    s["scheme"] = to_string(cfg.sensing->scheme);
    s["m"] = cfg.sensing->m;
    if (cfg.sensing->seed) s["seed"] = *cfg.sensing->seed;
    s["noise_before_compression"] = cfg.sensing->noise_before_compression;
    j["sensing"] = s;
  }
  j["solver"] = {{"method", to_string(cfg.method)},
                 {"mu", cfg.solver.mu},
                 {"alpha", cfg.solver.alpha},
                 {"box", cfg.solver.box_active},
                 {"s", cfg.solver.s},
                 {"n_max", cfg.solver.n_max},
                 {"n_iter", cfg.solver.n_iter},
                 {"inner_iter", cfg.solver.inner_iter},
                 {"tolerance", cfg.solver.tolerance}};
  if (cfg.sweep) {
    ordered_json sw;
    sw["m_values"] = cfg.sweep->m_values;
    sw["schemes"] = ordered_json::array();
    for (auto s : cfg.sweep->schemes) sw["schemes"].push_back(to_string(s));
    j["sweep"] = sw;
  }
  if (!cfg.mu_grid.empty()) j["mu_grid"] = cfg.mu_grid;
  j["output_dir"] = cfg.output_dir;
  j["seed"] = cfg.master_seed;
  return j;
}

// Tracks artifacts written by a run so partial output can be removed on
// failure.
class ArtifactSink {
 public:
  explicit ArtifactSink(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  std::filesystem::path path(const std::string& name) {
    written_.push_back(dir_ / name);
    return written_.back();
  }

  void discard_all() {
    for (const auto& p : written_) {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
  }

  ordered_json hashes() const {
    ordered_json h;
    for (const auto& p : written_)
      h[p.filename().string()] = fnv1a_to_hex(hash_file(p));
    return h;
  }

  static std::string fnv1a_to_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
};

void write_json(const std::filesystem::path& path, const ordered_json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f << j.dump(2) << '\n';
}

ExperimentConfig apply_overrides(ExperimentConfig cfg, const RunOptions& options) {
  if (options.out_override) cfg.output_dir = *options.out_override;
  if (options.seed_override) cfg.master_seed = *options.seed_override;
  return cfg;
}

struct ReconOutput {
  Eigen::VectorXd values;                 // clamped to [0, n_max]
  std::vector<IterationRecord> trace;     // empty for tikhonov
  double wall_time_s = 0.0;
};

ReconOutput reconstruct(SolverMethod method, const SolverConfig& solver,
                        const Eigen::MatrixXd& op, const Eigen::VectorXd& data,
                        int rows, int cols) {
  ReconOutput out;
  switch (method) {
    case SolverMethod::Tikhonov: {
      const auto t0 = std::chrono::steady_clock::now();
      const Eigen::VectorXd n = quadratic_tikhonov(op, data, solver.mu);
      out.values = n.cwiseMax(0.0).cwiseMin(solver.n_max);
      out.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return out;
    }
    case SolverMethod::DouglasRachford: {
      const ReconResult r = douglas_rachford_solve(op, data, solver, rows, cols);
      out.values = r.reconstruction.cwiseMax(0.0).cwiseMin(solver.n_max);
      out.trace = r.trace;
      out.wall_time_s = r.wall_time_s;
      return out;
    }
    case SolverMethod::ForwardBackward: {
      const ReconResult r = forward_backward_solve(op, data, solver, rows, cols);
      out.values = r.reconstruction.cwiseMax(0.0).cwiseMin(solver.n_max);
      out.trace = r.trace;
      out.wall_time_s = r.wall_time_s;
      return out;
    }
  }
  throw std::invalid_argument("unknown solver method");
}

ordered_json metrics_json(const MetricsReport& rep) {
  ordered_json j;
  j["phantom"] = rep.phantom;
  j["method"] = rep.method;
  j["scheme"] = rep.scheme;
  j["m"] = rep.m;
  j["relative_rmse"] = rep.relative_rmse;
  j["snr_db"] = rep.snr_db;
  if (rep.pearson) j["pearson"] = *rep.pearson;
  else j["pearson"] = nullptr;
  return j;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  try {
    ExperimentConfig cfg;
    if (j.contains("geometry")) cfg.geometry = parse_geometry(j["geometry"]);
    if (j.contains("phantom"))
      cfg.phantom = phantom_kind_from_string(j["phantom"].get<std::string>());
    if (j.contains("noise_snr_db")) cfg.noise_snr_db = parse_snr(j["noise_snr_db"]);
    if (j.contains("sensing") && !j["sensing"].is_null()) {
      SensingSection s;
      const auto& sj = j["sensing"];
      s.scheme = activation_scheme_from_string(sj.at("scheme").get<std::string>());
      s.m = sj.at("m").get<int>();
      if (sj.contains("seed")) s.seed = sj["seed"].get<std::uint64_t>();
      if (sj.contains("noise_before_compression"))
        s.noise_before_compression = sj["noise_before_compression"].get<bool>();
      cfg.sensing = s;
    }
    if (j.contains("solver")) {
      const auto& sj = j["solver"];
      if (sj.contains("method"))
        cfg.method = solver_method_from_string(sj["method"].get<std::string>());
      if (sj.contains("mu")) cfg.solver.mu = sj["mu"].get<double>();
      if (sj.contains("alpha")) cfg.solver.alpha = sj["alpha"].get<double>();
      if (sj.contains("box")) cfg.solver.box_active = sj["box"].get<bool>();
      if (sj.contains("s")) cfg.solver.s = sj["s"].get<double>();
      if (sj.contains("n_max")) cfg.solver.n_max = sj["n_max"].get<double>();
      if (sj.contains("n_iter")) cfg.solver.n_iter = sj["n_iter"].get<int>();
      if (sj.contains("inner_iter")) cfg.solver.inner_iter = sj["inner_iter"].get<int>();
      if (sj.contains("tolerance")) cfg.solver.tolerance = sj["tolerance"].get<double>();
    }
    if (j.contains("sweep") && !j["sweep"].is_null()) {
      SweepSection sw;
      const auto& sj = j["sweep"];
      if (sj.contains("m_values")) sw.m_values = sj["m_values"].get<std::vector<int>>();
      if (sj.contains("schemes"))
        for (const auto& s : sj["schemes"])
          sw.schemes.push_back(activation_scheme_from_string(s.get<std::string>()));
      if (sw.m_values.empty())
        throw std::invalid_argument("config: sweep.m_values must be nonempty");
      if (sw.schemes.empty() && cfg.sensing) sw.schemes.push_back(cfg.sensing->scheme);
      if (sw.schemes.empty())
        throw std::invalid_argument("config: sweep needs schemes or a sensing section");
      cfg.sweep = sw;
    }
    if (j.contains("mu_grid")) cfg.mu_grid = j["mu_grid"].get<std::vector<double>>();
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("seed")) cfg.master_seed = j["seed"].get<std::uint64_t>();
    cfg.solver.validate();
    if (cfg.sensing && cfg.sensing->m < 1)
      throw std::invalid_argument("config: sensing.m must be >= 1");
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config error: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read config file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_config_json(text);
}

std::uint64_t geometry_hash(const GeometryConfig& config) {
  return hash_string(geometry_echo(config).dump());
}

LeadField obtain_lead_field(const GeometryConfig& config,
                            const std::filesystem::path& cache_dir, bool quiet) {
  std::filesystem::create_directories(cache_dir);
  const auto file =
      cache_dir / ("leadfield_" + ArtifactSink::fnv1a_to_hex(geometry_hash(config)) + ".bin");
  if (std::filesystem::exists(file)) {
    if (!quiet) std::cerr << "lead field cache hit: " << file << '\n';
    return read_lead_field_cache(file);
  }
  const Geometry g = build_geometry(config);
  const LeadField lf = assemble_lead_field(g);
  write_lead_field_cache(file, lf);
  if (!quiet) std::cerr << "lead field assembled and cached: " << file << '\n';
  return lf;
}

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct PreparedProblem {
  Eigen::MatrixXd op;      // normalized operator the solver sees
  Eigen::VectorXd data;    // measured data in the operator's scale
  std::optional<ActivationMatrix> activation;
  MeasurementSet raw_data;  // as measured (full or compressed layout)
};

// Builds the solve-ready system for one activation setting. `full_noisy`
// carries noise when it is added before compression; otherwise it is clean
// and noise is added to the compressed data.
PreparedProblem prepare_problem(const ExperimentConfig& cfg, const LeadField& lf,
                                const MeasurementSet& full, ActivationScheme scheme, int m,
                                bool noise_before_compression) {
  PreparedProblem p;
  const std::uint64_t act_seed =
      cfg.sensing && cfg.sensing->seed ? *cfg.sensing->seed : cfg.activation_seed();
  const ActivationMatrix a = make_activation(scheme, m, lf.n_coils, act_seed);
  MeasurementSet cs = compress_data(full, a);
  if (!noise_before_compression) {
    cs.values = add_noise(cs.values, cfg.noise_snr_db, cfg.post_compression_noise_seed());
    cs.noise_snr_db = cfg.noise_snr_db;
    cs.seed = cfg.post_compression_noise_seed();
  }
  const CsOperator op = compose_operator(lf, a);
  p.op = op.matrix;
  p.data = cs.values / op.scale;
  p.activation = a;
  p.raw_data = std::move(cs);
  return p;
}

}  // namespace

void run_experiment(const ExperimentConfig& raw, const RunOptions& options) {
  const ExperimentConfig cfg = apply_overrides(raw, options);
  ArtifactSink sink(cfg.output_dir);
  try {
    ordered_json timings;
    auto t0 = std::chrono::steady_clock::now();
    const LeadField lf = obtain_lead_field(cfg.geometry, sink.dir() / "cache", options.quiet);
    timings["lead_field_s"] = seconds_since(t0);

    const GridSpec grid = cfg.geometry.grid;
    const ConcentrationImage truth = make_phantom(cfg.phantom, grid);
    write_pgm(sink.path("phantom.pgm"), truth);
    write_csv_vector(sink.path("phantom.csv"), truth.values);

    t0 = std::chrono::steady_clock::now();
    const bool noise_first = !cfg.sensing || cfg.sensing->noise_before_compression;
    const MeasurementSet full = simulate_data(
        lf, truth, noise_first ? cfg.noise_snr_db : std::numeric_limits<double>::infinity(),
        cfg.noise_seed());
    write_csv_vector(sink.path("measurements_full.csv"), full.values);

    Eigen::MatrixXd op;
    Eigen::VectorXd data;
    if (cfg.sensing) {
      PreparedProblem p = prepare_problem(cfg, lf, full, cfg.sensing->scheme,
                                          cfg.sensing->m, noise_first);
      write_csv_matrix(sink.path("activation.csv"), p.activation->matrix);
      write_csv_vector(sink.path("measurements_cs.csv"), p.raw_data.values);
      op = std::move(p.op);
      data = std::move(p.data);
    } else {
      op = lf.matrix;
      data = full.values;
    }
    timings["data_s"] = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const ReconOutput rec = reconstruct(cfg.method, cfg.solver, op, data,
                                        grid.n_per_side, grid.n_per_side);
    timings["solve_s"] = seconds_since(t0);

    ConcentrationImage recon;
    recon.grid = grid;
    recon.n_max = cfg.solver.n_max;
    recon.values = rec.values;
    write_pgm(sink.path("recon.pgm"), recon);
    write_csv_vector(sink.path("recon.csv"), recon.values);
    if (!rec.trace.empty()) write_trace_csv(sink.path("trace.csv"), rec.trace);

    MetricsReport metrics = evaluate(truth, recon);
    metrics.phantom = to_string(cfg.phantom);
    metrics.method = to_string(cfg.method);
    metrics.scheme = cfg.sensing ? to_string(cfg.sensing->scheme) : "full";
    metrics.m = cfg.sensing ? cfg.sensing->m : lf.n_coils;
    write_json(sink.path("metrics.json"), metrics_json(metrics));

    ordered_json manifest;
    manifest["toolkit_version"] = kToolkitVersion;
    manifest["config"] = config_echo(cfg);
    manifest["seeds"] = {{"master", cfg.master_seed},
                         {"noise", cfg.noise_seed()},
                         {"activation", cfg.sensing && cfg.sensing->seed
                                            ? *cfg.sensing->seed
                                            : cfg.activation_seed()},
                         {"post_compression_noise", cfg.post_compression_noise_seed()}};
    manifest["artifacts"] = sink.hashes();
    write_json(sink.dir() / "manifest.json", manifest);
    // Wall times vary run to run; they live outside the manifest so reruns
    // of the same config stay bitwise identical.
    write_json(sink.dir() / "timings.json", timings);
    if (!options.quiet)
      std::cerr << "experiment done: rmse=" << metrics.relative_rmse
                << " snr_db=" << metrics.snr_db << '\n';
  } catch (...) {
    sink.discard_all();
    throw;
  }
}

void run_sweep(const ExperimentConfig& raw, const RunOptions& options) {
  const ExperimentConfig cfg = apply_overrides(raw, options);
  if (!cfg.sweep) throw std::invalid_argument("run_sweep: config has no sweep section");
  ArtifactSink sink(cfg.output_dir);
  try {
    const LeadField lf = obtain_lead_field(cfg.geometry, sink.dir() / "cache", options.quiet);
    const GridSpec grid = cfg.geometry.grid;
    const ConcentrationImage truth = make_phantom(cfg.phantom, grid);

    const bool noise_first = !cfg.sensing || cfg.sensing->noise_before_compression;
    const MeasurementSet full = simulate_data(
        lf, truth, noise_first ? cfg.noise_snr_db : std::numeric_limits<double>::infinity(),
        cfg.noise_seed());

    std::ofstream f(sink.path("sweep.csv"));
    f << "phantom,method,scheme,m,relative_rmse,snr_db,pearson,ok,error\n";
    for (const auto scheme : cfg.sweep->schemes) {
      for (const int m : cfg.sweep->m_values) {
        f << to_string(cfg.phantom) << ',' << to_string(cfg.method) << ','
          << to_string(scheme) << ',' << m << ',';
        try {
          const PreparedProblem p = prepare_problem(cfg, lf, full, scheme, m, noise_first);
          const ReconOutput rec = reconstruct(cfg.method, cfg.solver, p.op, p.data,
                                              grid.n_per_side, grid.n_per_side);
          ConcentrationImage recon;
          recon.grid = grid;
          recon.n_max = cfg.solver.n_max;
          recon.values = rec.values;
          const MetricsReport metrics = evaluate(truth, recon);
          f << format_double(metrics.relative_rmse) << ',' << format_double(metrics.snr_db)
            << ',' << (metrics.pearson ? format_double(*metrics.pearson) : "") << ",1,\n";
          if (!options.quiet)
            std::cerr << "sweep " << to_string(scheme) << " m=" << m
                      << " rmse=" << metrics.relative_rmse << '\n';
        } catch (const std::exception& e) {
          f << ",,,0," << e.what() << '\n';  // point flagged, sweep continues
        }
      }
    }
    f.close();

    ordered_json manifest;
    manifest["toolkit_version"] = kToolkitVersion;
    manifest["config"] = config_echo(cfg);
    manifest["artifacts"] = sink.hashes();
    write_json(sink.dir() / "manifest.json", manifest);
  } catch (...) {
    sink.discard_all();
    throw;
  }
}

void run_lcurve(const ExperimentConfig& raw, const RunOptions& options) {
  const ExperimentConfig cfg = apply_overrides(raw, options);
  ArtifactSink sink(cfg.output_dir);
  try {
    const LeadField lf = obtain_lead_field(cfg.geometry, sink.dir() / "cache", options.quiet);
    const ConcentrationImage truth = make_phantom(cfg.phantom, cfg.geometry.grid);
    const MeasurementSet full = simulate_data(lf, truth, cfg.noise_snr_db, cfg.noise_seed());

    std::vector<double> mu_grid = cfg.mu_grid;
    if (mu_grid.empty())
      for (int e = -16; e <= -7; ++e) mu_grid.push_back(std::pow(10.0, e));

    const auto points = l_curve(lf.matrix, full.values, mu_grid);
    std::ofstream f(sink.path("lcurve.csv"));
    f << "mu,log10_residual_sq,log10_solution_norm,ok\n";
    for (const auto& p : points)
      f << format_double(p.mu) << ',' << format_double(p.log_residual) << ','
        << format_double(p.log_solution_norm) << ',' << (p.ok ? 1 : 0) << '\n';
  } catch (...) {
    sink.discard_all();
    throw;
  }
}

void run_spectrum(const ExperimentConfig& raw, const RunOptions& options) {
  const ExperimentConfig cfg = apply_overrides(raw, options);
  ArtifactSink sink(cfg.output_dir);
  try {
    const LeadField lf = obtain_lead_field(cfg.geometry, sink.dir() / "cache", options.quiet);
    const Eigen::VectorXd sv = singular_spectrum(lf.matrix);
    std::ofstream f(sink.path("spectrum.csv"));
    f << "index,singular_value\n";
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      f << i << ',' << format_double(sv(i)) << '\n';
  } catch (...) {
    sink.discard_all();
    throw;
  }
}

void run_leadfield_only(const ExperimentConfig& raw, const RunOptions& options) {
  const ExperimentConfig cfg = apply_overrides(raw, options);
  std::filesystem::create_directories(cfg.output_dir);
  obtain_lead_field(cfg.geometry, std::filesystem::path(cfg.output_dir) / "cache",
                    options.quiet);
}

}  // namespace memrx
