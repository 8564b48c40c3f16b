// Command-line front end: synthetic experiments, TDOA estimation, benchmark
// sweeps, source localization and figure exports. See README for the file
// schemas and exit codes (0 ok, 1 I/O, 2 validation).

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "fsgcc/fft.hpp"
#include "fsgcc/fsgcc.hpp"
#include "fsgcc/lowrank.hpp"
#include "fsgcc/pipeline.hpp"
#include "fsgcc/report.hpp"
#include "fsgcc/rng.hpp"
#include "fsgcc/roomsim.hpp"
#include "fsgcc/sceneio.hpp"
#include "fsgcc/spectral.hpp"
#include "fsgcc/srp.hpp"
#include "fsgcc/tde.hpp"
#include "fsgcc/wav.hpp"

namespace fs = std::filesystem;
using namespace fsgcc;

namespace {

constexpr const char* kVersion = "0.1.0";

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string provenance_block(const std::string& config_text, uint64_t seed) {
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a(config_text)));
  std::string s;
  s += "version = " + std::string(kVersion) + "\n";
  s += "seed = " + std::to_string(seed) + "\n";
  s += "config_hash = " + std::string(hash) + "\n";
  s += "config:\n";
  std::istringstream in(config_text);
  std::string line;
  while (std::getline(in, line)) s += "  " + line + "\n";
  return s;
}

struct AnalysisOpts {
  AnalysisConfig config;
  std::string window_name = "hann";
  std::string out_dir = "out";
  uint64_t seed = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("-N,--frame-len", config.N, "frame length in samples");
    cmd->add_option("--hop", config.hop, "frame hop in samples");
    cmd->add_option("-B,--band-support", config.B, "spectral window support in bins");
    cmd->add_option("-M,--band-hop", config.M, "spectral window hop in bins");
    cmd->add_option("--window", window_name, "spectral window kind (hann|rect)")
        ->check(CLI::IsMember({"hann", "rect"}));
    cmd->add_option("--eps-floor", config.eps_floor,
                    "PHAT magnitude floor (negative = per-frame default)");
    cmd->add_flag("--refine", config.refine, "parabolic sub-sample peak refinement");
    cmd->add_option("--seed", seed, "root random seed");
    cmd->add_option("-o,--out-dir", out_dir, "output directory");
  }

  void finalize() {
    config.window_kind =
        window_name == "rect" ? WindowKind::rectangular : WindowKind::hann;
  }

  std::string text() const {
    std::string s;
    s += "N = " + std::to_string(config.N) + "\n";
    s += "hop = " + std::to_string(config.hop) + "\n";
    s += "B = " + std::to_string(config.B) + "\n";
    s += "M = " + std::to_string(config.M) + "\n";
    s += "window = " + window_name + "\n";
    s += "eps_floor = " + fmt_g(config.eps_floor) + "\n";
    s += "refine = " + std::to_string(config.refine ? 1 : 0) + "\n";
    return s;
  }
};

std::vector<TdeMethod> parse_methods(const std::string& csv) {
  std::vector<TdeMethod> out;
  std::stringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (!tok.empty()) out.push_back(tde_method_from_string(tok));
  }
  if (out.empty()) throw std::invalid_argument("no methods given");
  return out;
}

std::vector<double> parse_list(const std::string& csv, const std::string& what) {
  std::vector<double> out;
  std::stringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty list for " + what);
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + dir);
}

struct FrameEstimates {
  std::vector<int> frame_indices;
  std::vector<FrameOutcome> outcomes;
};

FrameEstimates run_frames(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                          const Eigen::VectorXd& vad_reference, double fs,
                          const AnalysisConfig& config, const SpectralWindow& win,
                          TdeMethod method, int max_frames) {
  const auto frames1 = frame_signal(x1, config.N, config.hop, config.taper);
  const auto frames2 = frame_signal(x2, config.N, config.hop, config.taper);
  auto active = active_frames(vad_reference, config.N, config.hop);
  if (max_frames > 0 && static_cast<int>(active.size()) > max_frames) {
    // evenly thinned so the kept frames still span the signal
    std::vector<int> thinned;
    const double step = static_cast<double>(active.size()) / max_frames;
    for (int i = 0; i < max_frames; ++i)
      thinned.push_back(active[static_cast<size_t>(i * step)]);
    active = thinned;
  }

  FrameEstimates out;
  for (int idx : active) {
    if (idx >= static_cast<int>(frames1.size()) || idx >= static_cast<int>(frames2.size()))
      continue;
    const FramePair pair = make_frame_pair(frames1[idx], frames2[idx], fs, idx);
    out.frame_indices.push_back(idx);
    out.outcomes.push_back(process_frame_pair(pair, win, config, method));
  }
  return out;
}

/// Frames where the estimator produced nothing still count against the
/// method: they are folded in as guaranteed-anomalous records.
std::vector<EstimateRecord> to_records(const FrameEstimates& frames, int tau_true,
                                       double t_c) {
  std::vector<EstimateRecord> records;
  for (const auto& outcome : frames.outcomes) {
    EstimateRecord rec;
    rec.tau_true = tau_true;
    if (outcome.no_reliable_bands) {
      rec.tau_hat = tau_true + 10.0 * t_c;
    } else {
      rec.tau_hat = outcome.estimate.tau_hat;
      rec.fspr_db = outcome.estimate.fspr_db;
    }
    records.push_back(rec);
  }
  return records;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const std::string& scene_path, const std::string& out_dir) {
  const SimScene scene = parse_scene_file(scene_path);
  const auto chans = synthesize_array(scene);

  ensure_dir(out_dir);
  for (size_t m = 0; m < chans.size(); ++m)
    write_wav_float32(out_dir + "/mic" + std::to_string(m) + ".wav", chans[m], scene.fs);

  std::string meta = provenance_block(scene_to_text(scene), scene.seed);
  if (chans.size() == 2)
    meta += "tau_true = " + std::to_string(true_tdoa(scene, 0, 1)) + "\n";
  write_text_file(out_dir + "/meta.txt", meta);
  std::cout << "wrote " << chans.size() << " channels to " << out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// tde

int cmd_tde(const std::string& scene_path, const std::string& wav1_path,
            const std::string& wav2_path, AnalysisOpts& opts,
            const std::string& method_name, int max_frames) {
  opts.finalize();
  const TdeMethod method = tde_method_from_string(method_name);
  const SpectralWindow win = make_spectral_window(opts.config.window_kind, opts.config.B,
                                                  opts.config.M, opts.config.N);

  Eigen::VectorXd x1, x2, vad_ref, source;
  double fs = 0.0;
  std::optional<int> tau_true;
  std::string config_text = opts.text();

  if (!scene_path.empty()) {
    const SimScene scene = parse_scene_file(scene_path);
    if (scene.mic_positions.size() != 2)
      throw std::invalid_argument("tde needs a two-mic scene");
    const PairSignals pair = synthesize_pair(scene);
    x1 = pair.x1;
    x2 = pair.x2;
    fs = scene.fs;
    tau_true = pair.tau_true;
    source = gen_test_signal(scene.signal, scene.fs);
    // voice-activity reference excludes the additive noise
    SimScene clean = scene;
    clean.snr_db = std::numeric_limits<double>::infinity();
    vad_ref = synthesize_pair(clean).x1;
    config_text += scene_to_text(scene);
  } else {
    const WavData w1 = read_wav(wav1_path);
    const WavData w2 = read_wav(wav2_path);
    if (w1.fs != w2.fs) throw std::invalid_argument("wav sample rates do not match");
    x1 = w1.samples;
    x2 = w2.samples;
    fs = w1.fs;
    vad_ref = x1;
    source = x1;
    config_text += "wav1 = " + wav1_path + "\nwav2 = " + wav2_path + "\n";
  }

  const FrameEstimates frames =
      run_frames(x1, x2, vad_ref, fs, opts.config, win, method, max_frames);
  if (frames.outcomes.empty()) throw std::invalid_argument("no active frames to process");

  ensure_dir(opts.out_dir);
  std::string csv = "frame,tau_hat,tau_hat_frac,fspr_db,w_mean,w_active\n";
  for (size_t i = 0; i < frames.outcomes.size(); ++i) {
    const FrameOutcome& out = frames.outcomes[i];
    csv += std::to_string(frames.frame_indices[i]) + ",";
    if (out.no_reliable_bands) {
      csv += ",,,";
    } else {
      csv += std::to_string(out.estimate.tau_hat) + ",";
      csv += (out.estimate.tau_hat_frac ? fmt_g(*out.estimate.tau_hat_frac) : "") + ",";
      csv += (out.estimate.fspr_db ? fmt_g(*out.estimate.fspr_db) : "") + ",";
    }
    if (out.weights) {
      const auto& w = out.weights->w;
      csv += fmt_g(w.mean()) + "," + std::to_string((w.array() > 0.5).count());
    } else {
      csv += ",";
    }
    csv += "\n";
  }
  write_text_file(opts.out_dir + "/estimates.csv", csv);

  std::string summary = provenance_block(config_text, opts.seed);
  summary += "method = " + to_string(method) + "\n";
  summary += "frames_processed = " + std::to_string(frames.outcomes.size()) + "\n";
  if (tau_true) {
    const double t_c = correlation_time(source);
    const MetricsReport report =
        aggregate_metrics(to_records(frames, *tau_true, t_c), t_c);
    summary += "tau_true = " + std::to_string(*tau_true) + "\n";
    summary += metrics_text_block(report);
  }
  write_text_file(opts.out_dir + "/summary.txt", summary);
  std::cout << "wrote " << opts.out_dir << "/estimates.csv ("
            << frames.outcomes.size() << " frames)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// benchmark

SimScene random_pair_scene(Rng& rng, double refl, double snr_db, double fs,
                           double duration_s, uint64_t signal_seed) {
  SimScene scene;
  scene.room_dims = {6.0, 7.0, 3.0};
  scene.refl = refl;
  scene.snr_db = snr_db;
  scene.fs = fs;
  scene.max_order = refl > 0.0 ? 14 : 0;
  scene.signal.kind = TestSignalSpec::Kind::speechlike;
  scene.signal.duration_s = duration_s;
  scene.signal.seed = signal_seed;

  const double spacing = 0.5;
  const double z = 1.25;
  const double margin = 0.4;
  const double cx = rng.uniform(margin + spacing, scene.room_dims[0] - margin - spacing);
  const double cy = rng.uniform(margin + spacing, scene.room_dims[1] - margin - spacing);
  const double angle = rng.uniform(0.0, std::numbers::pi);
  const Eigen::Vector3d offset{0.5 * spacing * std::cos(angle),
                               0.5 * spacing * std::sin(angle), 0.0};
  const Eigen::Vector3d center{cx, cy, z};
  scene.mic_positions = {center + offset, center - offset};
  scene.source_pos = {rng.uniform(margin, scene.room_dims[0] - margin),
                      rng.uniform(margin, scene.room_dims[1] - margin), z};
  return scene;
}

int cmd_benchmark(AnalysisOpts& opts, const std::string& methods_csv,
                  const std::string& snr_csv, const std::string& refl_csv, int n_scenes,
                  int n_noise_seeds, double fs, double duration_s, int max_frames) {
  opts.finalize();
  const std::vector<TdeMethod> methods = parse_methods(methods_csv);
  const std::vector<double> snrs = parse_list(snr_csv, "snr");
  const std::vector<double> refls = parse_list(refl_csv, "refl");
  if (n_scenes < 1 || n_noise_seeds < 1)
    throw std::invalid_argument("need at least one scene and one noise seed");
  const SpectralWindow win = make_spectral_window(opts.config.window_kind, opts.config.B,
                                                  opts.config.M, opts.config.N);

  std::string config_text = opts.text();
  config_text += "methods = " + methods_csv + "\nsnr = " + snr_csv +
                 "\nrefl = " + refl_csv + "\nscenes = " + std::to_string(n_scenes) +
                 "\nnoise_seeds = " + std::to_string(n_noise_seeds) +
                 "\nfs = " + fmt_g(fs) + "\nduration_s = " + fmt_g(duration_s) + "\n";

  // One source realization shared across the sweep; its correlation time
  // sets the anomaly threshold for every cell.
  TestSignalSpec source_spec;
  source_spec.kind = TestSignalSpec::Kind::speechlike;
  source_spec.duration_s = duration_s;
  source_spec.seed = opts.seed;
  const double t_c = correlation_time(gen_test_signal(source_spec, fs));

  struct Cell {
    TdeMethod method;
    double snr_db;
    double refl;
    std::optional<MetricsReport> report;
  };
  std::vector<Cell> cells;

  Rng root(opts.seed);
  for (double refl : refls) {
    for (double snr : snrs) {
      std::vector<std::vector<EstimateRecord>> per_method(methods.size());
      for (int s = 0; s < n_scenes; ++s) {
        Rng scene_rng = root.split(20000 + s);
        SimScene scene = random_pair_scene(scene_rng, refl, snr, fs, duration_s, opts.seed);
        SimScene clean = scene;
        clean.snr_db = std::numeric_limits<double>::infinity();
        const Eigen::VectorXd vad_ref = synthesize_pair(clean).x1;
        for (int r = 0; r < n_noise_seeds; ++r) {
          scene.seed = root.split(s * 1000 + r).seed();
          const PairSignals pair = synthesize_pair(scene);
          for (size_t m = 0; m < methods.size(); ++m) {
            const FrameEstimates frames = run_frames(
                pair.x1, pair.x2, vad_ref, fs, opts.config, win, methods[m], max_frames);
            const auto records = to_records(frames, pair.tau_true, t_c);
            per_method[m].insert(per_method[m].end(), records.begin(), records.end());
          }
        }
      }
      for (size_t m = 0; m < methods.size(); ++m) {
        Cell cell{methods[m], snr, refl, std::nullopt};
        if (!per_method[m].empty()) cell.report = aggregate_metrics(per_method[m], t_c);
        cells.push_back(cell);
      }
    }
  }

  ensure_dir(opts.out_dir);
  std::string csv = "method,snr_db,refl," + metrics_csv_header() + "\n";
  for (const auto& cell : cells) {
    csv += to_string(cell.method) + "," + fmt_g(cell.snr_db) + "," + fmt_g(cell.refl) + ",";
    if (cell.report) csv += metrics_csv_row(*cell.report);
    else csv += ",,,,,,,";
    csv += "\n";
  }
  write_text_file(opts.out_dir + "/benchmark.csv", csv);
  write_text_file(opts.out_dir + "/provenance.txt",
                  provenance_block(config_text, opts.seed));

  // one chart per metric and reflection condition, methods overlaid
  struct MetricDef {
    const char* name;
    std::function<std::optional<double>(const MetricsReport&)> get;
  };
  const std::vector<MetricDef> defs{
      {"p_anomalous",
       [](const MetricsReport& r) { return std::optional<double>(r.p_anomalous); }},
      {"fspr_na_db", [](const MetricsReport& r) { return r.fspr_na_db; }},
      {"mae_na", [](const MetricsReport& r) { return r.mae_na; }},
      {"sdae_na", [](const MetricsReport& r) { return r.sdae_na; }},
  };
  for (double refl : refls) {
    for (const auto& def : defs) {
      std::vector<ChartSeries> series;
      for (const TdeMethod method : methods) {
        ChartSeries ser;
        ser.label = to_string(method);
        for (const auto& cell : cells) {
          if (cell.method != method || cell.refl != refl || !cell.report) continue;
          const auto v = def.get(*cell.report);
          if (!v) continue;
          ser.x.push_back(cell.snr_db);
          ser.y.push_back(*v);
        }
        series.push_back(ser);
      }
      char name[160];
      std::snprintf(name, sizeof(name), "%s/%s_refl%g.svg", opts.out_dir.c_str(),
                    def.name, refl);
      char title[96];
      std::snprintf(title, sizeof(title), "%s vs SNR (refl = %g)", def.name, refl);
      write_text_file(name, line_chart_svg(title, "SNR [dB]", def.name, series));
    }
  }
  std::cout << "wrote " << opts.out_dir << "/benchmark.csv (" << cells.size()
            << " cells)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// localize

std::vector<Eigen::Vector3d> wall_mics(const Eigen::Vector3d& room, double z) {
  const double m = 0.2;
  return {{m, room[1] / 2, z}, {room[0] - m, room[1] / 2, z}, {room[0] / 2, m, z},
          {room[0] / 2, room[1] - m, z}, {m, m, z}, {room[0] - m, room[1] - m, z}};
}

int cmd_localize(const std::string& scene_path, AnalysisOpts& opts,
                 const std::string& methods_csv, const std::string& snr_csv,
                 const std::string& refl_csv, double grid_resolution, int n_scenes,
                 int n_noise_seeds, double fs, double duration_s, int frames_per_run) {
  opts.finalize();
  const std::vector<TdeMethod> methods = parse_methods(methods_csv);
  const SpectralWindow win = make_spectral_window(opts.config.window_kind, opts.config.B,
                                                  opts.config.M, opts.config.N);
  if (grid_resolution <= 0.0)
    throw std::invalid_argument("grid resolution must be positive");

  std::optional<SimScene> fixed_scene;
  if (!scene_path.empty()) {
    fixed_scene = parse_scene_file(scene_path);
    if (fixed_scene->mic_positions.size() < 3)
      throw std::invalid_argument("localize needs at least 3 mics");
  }

  const std::vector<double> snrs = parse_list(snr_csv, "snr");
  const std::vector<double> refls = parse_list(refl_csv, "refl");

  std::string config_text = opts.text();
  config_text += "methods = " + methods_csv + "\nsnr = " + snr_csv + "\nrefl = " +
                 refl_csv + "\ngrid = " + fmt_g(grid_resolution) + "\n";
  if (!scene_path.empty()) config_text += "scene = " + scene_path + "\n";

  struct Row {
    TdeMethod method;
    double refl, snr;
    std::vector<double> errors;
  };
  std::vector<Row> rows;
  for (double refl : refls)
    for (double snr : snrs)
      for (TdeMethod m : methods) rows.push_back({m, refl, snr, {}});

  ensure_dir(opts.out_dir);
  Rng root(opts.seed);
  int maps_written = 0;

  for (auto& row : rows) {
    for (int s = 0; s < n_scenes; ++s) {
      SimScene scene;
      if (fixed_scene) {
        scene = *fixed_scene;
      } else {
        Rng scene_rng = root.split(30000 + s);
        scene.room_dims = {6.0, 7.0, 3.0};
        scene.mic_positions = wall_mics(scene.room_dims, 1.25);
        scene.source_pos = {scene_rng.uniform(0.5, 5.5), scene_rng.uniform(0.5, 6.5),
                            1.25};
        scene.fs = fs;
        scene.signal.kind = TestSignalSpec::Kind::speechlike;
        scene.signal.duration_s = duration_s;
        scene.signal.seed = opts.seed;
      }
      scene.refl = row.refl;
      scene.max_order = row.refl > 0.0 ? 10 : 0;
      scene.snr_db = row.snr;

      const SrpGrid grid =
          make_planar_grid(scene.room_dims, scene.source_pos[2], grid_resolution);
      SimScene clean = scene;
      clean.snr_db = std::numeric_limits<double>::infinity();
      const auto clean_chans = synthesize_array(clean);
      const auto active = active_frames(clean_chans[0], opts.config.N, opts.config.hop);
      if (active.empty()) continue;

      for (int r = 0; r < n_noise_seeds; ++r) {
        scene.seed = root.split(s * 1000 + r).seed();
        const auto chans = synthesize_array(scene);
        std::vector<std::vector<Eigen::VectorXd>> framed;
        for (const auto& ch : chans)
          framed.push_back(
              frame_signal(ch, opts.config.N, opts.config.hop, opts.config.taper));

        const int frame_count =
            std::min<int>(frames_per_run, static_cast<int>(active.size()));
        for (int f = 0; f < frame_count; ++f) {
          const int idx = active[f * active.size() / frame_count];

          std::vector<Eigen::VectorXd> gccs;
          std::vector<MicPairGeometry> pairs;
          for (size_t i = 0; i < chans.size(); ++i) {
            for (size_t j = i + 1; j < chans.size(); ++j) {
              const FramePair fp =
                  make_frame_pair(framed[i][idx], framed[j][idx], scene.fs, idx);
              const FrameOutcome out =
                  process_frame_pair(fp, win, opts.config, row.method);
              gccs.push_back(out.no_reliable_bands ? Eigen::VectorXd::Zero(opts.config.N)
                                                   : out.gcc);
              pairs.push_back({scene.mic_positions[i], scene.mic_positions[j]});
            }
          }
          const GccSource source = row.method == TdeMethod::gcc ? GccSource::gcc
                                   : row.method == TdeMethod::fs_svd ? GccSource::fs_svd
                                                                     : GccSource::fs_wsvd;
          const SrpMap map = msrp_map(gccs, pairs, grid, scene.fs, scene.c, source);
          row.errors.push_back(localize(map, scene.source_pos));

          if (s == 0 && r == 0 && f == 0) {
            // Fig-8-style map export for the first frame of each condition
            char base[192];
            std::snprintf(base, sizeof(base), "%s/map_%s_refl%g_snr%g",
                          opts.out_dir.c_str(), to_string(row.method).c_str(), row.refl,
                          row.snr);
            std::string csv = "x,y,z,score\n";
            for (size_t g = 0; g < grid.points.size(); ++g)
              csv += fmt_g(grid.points[g][0]) + "," + fmt_g(grid.points[g][1]) + "," +
                     fmt_g(grid.points[g][2]) + "," + fmt_g(map.scores[g]) + "\n";
            write_text_file(std::string(base) + ".csv", csv);

            // scores arrive x-major from make_planar_grid
            const int ny =
                static_cast<int>(std::floor(scene.room_dims[1] / grid_resolution));
            const int nx = static_cast<int>(grid.points.size()) / ny;
            Eigen::MatrixXd img(ny, nx);
            for (int ix = 0; ix < nx; ++ix)
              for (int iy = 0; iy < ny; ++iy) img(iy, ix) = map.scores[ix * ny + iy];
            write_text_file(
                std::string(base) + ".svg",
                heatmap_svg(std::string("M-SRP map (") + to_string(row.method) + ")", img,
                            "x cell", "y cell"));
            ++maps_written;
          }
        }
      }
    }
  }

  std::string csv = "method,refl,snr_db,n,mean_error_m,median_error_m\n";
  for (const auto& row : rows) {
    csv += to_string(row.method) + "," + fmt_g(row.refl) + "," + fmt_g(row.snr) + ",";
    if (row.errors.empty()) {
      csv += "0,,\n";
      continue;
    }
    std::vector<double> sorted = row.errors;
    std::sort(sorted.begin(), sorted.end());
    const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / sorted.size();
    const double median = sorted[sorted.size() / 2];
    csv += std::to_string(sorted.size()) + "," + fmt_g(mean) + "," + fmt_g(median) + "\n";
  }
  write_text_file(opts.out_dir + "/localization.csv", csv);
  write_text_file(opts.out_dir + "/provenance.txt",
                  provenance_block(config_text, opts.seed));
  std::cout << "wrote " << opts.out_dir << "/localization.csv and " << maps_written
            << " maps\n";
  return 0;
}

// ---------------------------------------------------------------------------
// figures

Eigen::VectorXd circular_shift(const Eigen::VectorXd& x, int shift) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[((i + shift) % n + n) % n] = x[i];
  return out;
}

/// One synthetic frame pair: white source, sensor 1 delayed by tau0
/// (circularly, so the linear-phase model is exact), independent noise
/// confined to the given bands at the requested per-channel SNR.
FramePair banded_noise_pair(int n, int tau0,
                            const std::vector<std::pair<double, double>>& noise_bands,
                            double snr_db, Rng& rng) {
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s[i] = rng.gaussian();
  Eigen::VectorXd x1 = circular_shift(s, tau0);
  Eigen::VectorXd x2 = s;

  if (!noise_bands.empty() && std::isfinite(snr_db)) {
    const double sig_power = s.squaredNorm() / n;
    for (Eigen::VectorXd* x : {&x1, &x2}) {
      Eigen::VectorXd noise(n);
      for (int i = 0; i < n; ++i) noise[i] = rng.gaussian();
      Eigen::VectorXcd spec = dft(noise);
      for (int k = 0; k <= n / 2; ++k) {
        const double f = static_cast<double>(k) / n;
        bool keep = false;
        for (const auto& [lo, hi] : noise_bands)
          if (f >= lo && f <= hi) keep = true;
        if (!keep) {
          spec[k] = 0.0;
          if (k > 0 && k < n / 2) spec[n - k] = 0.0;
        }
      }
      noise = idft(spec).real();
      const double noise_power = noise.squaredNorm() / n;
      const double target = sig_power / std::pow(10.0, snr_db / 10.0);
      *x += noise * std::sqrt(target / noise_power);
    }
  }
  return make_frame_pair(x1, x2, 44100.0, 0);
}

int cmd_figures(const std::string& scenario, AnalysisOpts& opts) {
  opts.finalize();
  const int n = opts.config.N;
  const int tau0 = 40;
  Rng rng(opts.seed);

  std::vector<std::pair<double, double>> noise_bands;
  double snr_db = std::numeric_limits<double>::infinity();
  if (scenario == "fig1a") {
    // no noise
  } else if (scenario == "fig1b") {
    noise_bands = {{0.25, 0.5}};
    snr_db = -15.0;
  } else if (scenario == "fig1c" || scenario == "fig3") {
    noise_bands = {{0.0, 0.05}, {0.3, 0.5}};
    snr_db = -15.0;
  } else {
    throw std::invalid_argument("unknown scenario: " + scenario +
                                " (expected fig1a|fig1b|fig1c|fig3)");
  }

  const FramePair pair = banded_noise_pair(n, tau0, noise_bands, snr_db, rng);
  const PhatSpectrum psi = phat_cross_spectrum(pair);

  ensure_dir(opts.out_dir);
  const std::string config_text = opts.text() + "scenario = " + scenario + "\n";
  write_text_file(opts.out_dir + "/provenance.txt",
                  provenance_block(config_text, opts.seed));

  if (scenario == "fig3") {
    const SpectralWindow win = make_spectral_window(opts.config.window_kind, 64, 32, n);
    const FsGccMatrix mat = build_fsgcc_matrix(psi, win);
    std::ostringstream os;
    write_matrix_csv(mat, os);
    write_text_file(opts.out_dir + "/fsgcc_matrix.csv", os.str());
    write_text_file(opts.out_dir + "/fsgcc_magnitude.svg",
                    heatmap_svg("FS-GCC magnitude", mat.R.cwiseAbs(), "band", "lag"));
    write_text_file(opts.out_dir + "/fsgcc_real.svg",
                    heatmap_svg("FS-GCC real part", mat.R.real(), "band", "lag"));
    write_text_file(opts.out_dir + "/fsgcc_imag.svg",
                    heatmap_svg("FS-GCC imaginary part", mat.R.imag(), "band", "lag"));
    std::cout << "wrote FS-GCC matrix dump and heatmaps to " << opts.out_dir << "\n";
    return 0;
  }

  const Gcc gcc = conventional_gcc(psi);
  std::string csv = "lag,value\n";
  ChartSeries series{"gcc", {}, {}};
  for (int i = 0; i < n; ++i) {
    const int lag = index_to_lag(i, n);
    csv += std::to_string(lag) + "," + fmt_g(gcc.values[i]) + "\n";
    series.x.push_back(lag);
    series.y.push_back(gcc.values[i]);
  }
  write_text_file(opts.out_dir + "/" + scenario + ".csv", csv);
  write_text_file(opts.out_dir + "/" + scenario + ".svg",
                  line_chart_svg("conventional GCC (" + scenario + ")", "lag [samples]",
                                 "R", {series}));
  std::cout << "wrote " << opts.out_dir << "/" << scenario << ".csv (peak at lag "
            << gcc.peak_lag << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frequency-sliding GCC time-delay estimation toolkit"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "render a scene to per-mic WAV files");
  std::string sim_scene, sim_out = "out";
  sim->add_option("--scene", sim_scene, "scene file")->required();
  sim->add_option("-o,--out-dir", sim_out, "output directory");

  auto* tde = app.add_subcommand("tde", "per-frame TDOA estimation");
  AnalysisOpts tde_opts;
  std::string tde_scene, tde_wav1, tde_wav2, tde_method = "fs_wsvd";
  int tde_max_frames = 0;
  tde->add_option("--scene", tde_scene, "scene file (synthesizes the pair)");
  tde->add_option("--wav1", tde_wav1, "first sensor WAV");
  tde->add_option("--wav2", tde_wav2, "second sensor WAV");
  tde->add_option("--method", tde_method, "gcc|fs_svd|fs_wsvd");
  tde->add_option("--max-frames", tde_max_frames, "cap on processed frames (0 = all)");
  tde_opts.attach(tde);

  auto* bench = app.add_subcommand("benchmark", "sweep methods over SNR/reflection cells");
  AnalysisOpts bench_opts;
  std::string bench_methods = "gcc,fs_svd,fs_wsvd";
  std::string bench_snrs = "-10,0,10,20";
  std::string bench_refls = "0,0.8";
  int bench_scenes = 5, bench_seeds = 5, bench_max_frames = 20;
  double bench_fs = 44100.0, bench_duration = 0.5;
  bench->add_option("--methods", bench_methods, "comma list of methods");
  bench->add_option("--snr", bench_snrs, "comma list of SNRs in dB");
  bench->add_option("--refl", bench_refls, "comma list of reflection coefficients");
  bench->add_option("--scenes", bench_scenes, "random scenes per cell");
  bench->add_option("--noise-seeds", bench_seeds, "noise realizations per scene");
  bench->add_option("--fs", bench_fs, "sample rate");
  bench->add_option("--duration", bench_duration, "source duration in seconds");
  bench->add_option("--max-frames", bench_max_frames, "frames per run (0 = all)");
  bench_opts.attach(bench);

  auto* loc = app.add_subcommand("localize", "M-SRP grid localization");
  AnalysisOpts loc_opts;
  std::string loc_scene, loc_methods = "gcc,fs_wsvd";
  std::string loc_snrs = "0", loc_refls = "0";
  double loc_grid = 0.15, loc_fs = 44100.0, loc_duration = 0.5;
  int loc_scenes = 3, loc_seeds = 2, loc_frames = 5;
  loc->add_option("--scene", loc_scene,
                  "fixed scene file (>= 3 mics); omit for random scenes");
  loc->add_option("--methods", loc_methods, "comma list of methods");
  loc->add_option("--snr", loc_snrs, "comma list of SNRs in dB");
  loc->add_option("--refl", loc_refls, "comma list of reflection coefficients");
  loc->add_option("--grid", loc_grid, "grid resolution in meters");
  loc->add_option("--scenes", loc_scenes, "random scenes per condition");
  loc->add_option("--noise-seeds", loc_seeds, "noise realizations per scene");
  loc->add_option("--fs", loc_fs, "sample rate for random scenes");
  loc->add_option("--duration", loc_duration, "source duration in seconds");
  loc->add_option("--frames", loc_frames, "frames per run");
  loc_opts.attach(loc);

  auto* fig = app.add_subcommand("figures", "export example traces and matrix heatmaps");
  AnalysisOpts fig_opts;
  std::string fig_scenario;
  fig->add_option("--scenario", fig_scenario, "fig1a|fig1b|fig1c|fig3")->required();
  fig_opts.attach(fig);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_scene, sim_out);
    if (tde->parsed()) {
      const bool have_scene = !tde_scene.empty();
      const bool have_wavs = !tde_wav1.empty() && !tde_wav2.empty();
      if (have_scene == have_wavs)
        throw std::invalid_argument("give either --scene or both --wav1/--wav2");
      return cmd_tde(tde_scene, tde_wav1, tde_wav2, tde_opts, tde_method, tde_max_frames);
    }
    if (bench->parsed())
      return cmd_benchmark(bench_opts, bench_methods, bench_snrs, bench_refls,
                           bench_scenes, bench_seeds, bench_fs, bench_duration,
                           bench_max_frames);
    if (loc->parsed())
      return cmd_localize(loc_scene, loc_opts, loc_methods, loc_snrs, loc_refls, loc_grid,
                          loc_scenes, loc_seeds, loc_fs, loc_duration, loc_frames);
    if (fig->parsed()) return cmd_figures(fig_scenario, fig_opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
