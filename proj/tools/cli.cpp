#include "cli.hpp"

#include "tomoqubo/baselines.hpp"
#include "tomoqubo/encoding.hpp"
#include "tomoqubo/error.hpp"
#include "tomoqubo/geometry.hpp"
#include "tomoqubo/image.hpp"
#include "tomoqubo/metrics.hpp"
#include "tomoqubo/qubo.hpp"
#include "tomoqubo/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>

#ifndef TOMOQUBO_VERSION
#define TOMOQUBO_VERSION "0.0.0"
#endif

namespace tomoqubo::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// File names inside the working directory.
constexpr const char* kPhantomCsv = "phantom.csv";
constexpr const char* kPhantomPgm = "phantom.pgm";
constexpr const char* kSinogram = "sinogram.csv";
constexpr const char* kNoisySinogram = "sinogram_noisy.csv";
constexpr const char* kGeometry = "geometry.json";
constexpr const char* kQubo = "qubo.json";
constexpr const char* kQuboMeta = "qubo.meta.json";
constexpr const char* kSolve = "solve.json";
constexpr const char* kCompareJson = "compare.json";
constexpr const char* kCompareText = "compare.txt";

struct Common {
  std::string dir = ".";
};

struct PhantomArgs {
  std::string kind = "shepp-logan";
  int size = 0;
  std::vector<double> levels{1.0};
  double blur = 0.8;
  std::vector<double> thresholds;
  std::string input;
  int oversample = 8;
};

struct ProjectArgs {
  std::string input;
  int projections = 0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  int bins = 0;
  double bin_width = kDefaultBinWidth;
};

struct BuildArgs {
  double a = 1.0;
  double b = 1.0;
  std::string encoding = "mac_difference";
  std::vector<double> levels;
  int m1 = 0;
  int m2 = 0;
  std::string sinogram;
  bool noisy = false;
  std::string phantom;
};

struct SolveArgs {
  int restarts = 20;
  int sweeps = 1000;
  std::uint64_t seed = 0;
  std::optional<double> t0;
  std::optional<double> t1;
  int threads = 0;
  std::optional<long> time_limit_ms;
  bool exact = false;
  bool timing = false;
};

struct ReconstructArgs {
  std::string label;
};

struct BaselineArgs {
  std::string method = "all";
  int iterations = 6;
  double relaxation = 1.0;
  bool noisy = false;
};

struct CompareArgs {
  std::string truth;
  std::string scenario;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("missing or unreadable file: " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

Json read_json(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), e.byte, false);
  }
}

void write_json(const fs::path& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

void write_provenance(const fs::path& dir, const std::string& command, Json parameters) {
  Json doc;
  doc["tool"] = "tomoqubo";
  doc["version"] = TOMOQUBO_VERSION;
  doc["command"] = command;
  doc["parameters"] = std::move(parameters);
  write_json(dir / (command + ".provenance.json"), doc);
}

fs::path resolve(const Common& c, const std::string& given, const char* fallback) {
  return given.empty() ? fs::path(c.dir) / fallback : fs::path(given);
}

void ensure_dir(const Common& c) {
  std::error_code ec;
  fs::create_directories(c.dir, ec);
  if (ec) throw IoError("cannot create directory " + c.dir + ": " + ec.message());
}

Json geometry_to_json(const ProjectionGeometry& g) {
  Json doc;
  doc["image_width"] = g.image_width;
  doc["image_height"] = g.image_height;
  doc["angles_deg"] = g.angles_deg;
  doc["detector_bins"] = g.detector_bins;
  doc["bin_width"] = g.bin_width;
  return doc;
}

ProjectionGeometry geometry_from_json(const Json& doc) {
  try {
    ProjectionGeometry g;
    g.image_width = doc.at("image_width").get<int>();
    g.image_height = doc.at("image_height").get<int>();
    g.angles_deg = doc.at("angles_deg").get<std::vector<double>>();
    g.detector_bins = doc.at("detector_bins").get<int>();
    g.bin_width = doc.at("bin_width").get<double>();
    g.validate();
    return g;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("geometry.json: ") + e.what());
  }
}

EncodingScheme make_scheme(const std::string& kind_name, const std::vector<double>& levels,
                           int m1, int m2) {
  switch (parse_encoding_kind(kind_name)) {
    case EncodingKind::radix2: return EncodingScheme::radix2(m1, m2);
    case EncodingKind::mac: return EncodingScheme::mac(MacLevels(levels));
    case EncodingKind::mac_difference: return EncodingScheme::mac_difference(MacLevels(levels));
  }
  throw std::invalid_argument("unknown encoding");
}

// PGM needs integers in [0, 255]; other value ranges are rescaled for display.
void save_preview_pgm(const Image& img, const fs::path& path, double& scale) {
  const bool integral =
      (img == img.floor()).all() && img.maxCoeff() <= 255.0;
  scale = 1.0;
  if (!integral) {
    const double hi = img.maxCoeff();
    scale = hi > 0.0 ? 255.0 / hi : 1.0;
  }
  save_image(integral ? img : Image((img * scale).round()), path);
}

int cmd_phantom(const Common& c, const PhantomArgs& a, std::ostream& out) {
  const MacLevels levels(a.levels);
  if (a.oversample < 1) throw std::invalid_argument("--oversample must be >= 1");
  Image source;
  if (a.kind == "shepp-logan") {
    source = shepp_logan(a.size * a.oversample);
  } else if (a.kind == "image") {
    if (a.input.empty()) throw std::invalid_argument("--kind image requires --input");
    source = load_image(a.input);
  } else {
    throw std::invalid_argument("unknown phantom kind '" + a.kind + "'");
  }
  std::vector<double> thresholds = a.thresholds;
  if (thresholds.empty()) {
    const Image blurred = gaussian_blur(resize_area(source, a.size, a.size), a.blur);
    thresholds = default_thresholds(blurred, levels);
  }
  const Image phantom = prepare_phantom(source, a.size, a.blur, levels, thresholds);

  ensure_dir(c);
  save_image(phantom, fs::path(c.dir) / kPhantomCsv);
  double scale = 1.0;
  save_preview_pgm(phantom, fs::path(c.dir) / kPhantomPgm, scale);

  Json p;
  p["kind"] = a.kind;
  p["size"] = a.size;
  p["levels"] = a.levels;
  p["blur"] = a.blur;
  p["thresholds"] = thresholds;
  p["oversample"] = a.oversample;
  p["input"] = a.input;
  p["pgm_scale"] = scale;
  write_provenance(c.dir, "phantom", p);
  out << "phantom " << a.size << "x" << a.size << " written to " << c.dir << "\n";
  return kOk;
}

int cmd_project(const Common& c, const ProjectArgs& a, std::ostream& out) {
  const fs::path in = resolve(c, a.input, kPhantomCsv);
  const Image phantom = load_image(in);
  ProjectionGeometry geom = ProjectionGeometry::with_default_detector(
      static_cast<int>(phantom.cols()), static_cast<int>(phantom.rows()),
      isometric_angles(a.projections));
  geom.bin_width = a.bin_width;
  geom.detector_bins = a.bins > 0 ? a.bins
                                  : default_detector_bins(geom.image_width, geom.image_height, a.bin_width);
  geom.validate();
  const SystemMatrix sm = build_system_matrix(geom);
  const Sinogram ideal = forward_project(phantom, sm);

  ensure_dir(c);
  save_sinogram(ideal, fs::path(c.dir) / kSinogram);
  write_json(fs::path(c.dir) / kGeometry, geometry_to_json(geom));
  if (a.noise > 0.0) save_sinogram(add_noise(ideal, a.noise, a.seed), fs::path(c.dir) / kNoisySinogram);
  else if (a.noise < 0.0) throw std::invalid_argument("--noise must be >= 0");

  Json p;
  p["input"] = in.filename().string();
  p["projections"] = a.projections;
  p["detector_bins"] = geom.detector_bins;
  p["bin_width"] = geom.bin_width;
  p["noise"] = a.noise;
  p["seed"] = a.seed;
  write_provenance(c.dir, "project", p);
  out << "sinogram " << ideal.rows() << "x" << ideal.cols() << " written to " << c.dir << "\n";
  return kOk;
}

int cmd_build(const Common& c, const BuildArgs& a, std::ostream& out) {
  if (a.a == 0.0 && a.b == 0.0) throw ValidationError("--a and --b cannot both be 0 (degenerate model)");
  if (a.a < 0.0 || a.b < 0.0) throw ValidationError("--a and --b must be >= 0");

  const ProjectionGeometry geom = geometry_from_json(read_json(fs::path(c.dir) / kGeometry));
  const fs::path sino_path = resolve(c, a.sinogram, a.noisy ? kNoisySinogram : kSinogram);
  const Sinogram sino = load_sinogram(sino_path);

  std::vector<double> levels = a.levels;
  const fs::path phantom_prov = fs::path(c.dir) / "phantom.provenance.json";
  if (levels.empty() && a.encoding != "radix2") {
    if (!fs::exists(phantom_prov))
      throw std::invalid_argument("--levels is required when " + phantom_prov.string() + " is absent");
    levels = read_json(phantom_prov).at("parameters").at("levels").get<std::vector<double>>();
  }
  const EncodingScheme scheme = make_scheme(a.encoding, levels, a.m1, a.m2);
  const VariableMap map(geom.image_width, geom.image_height, scheme.bits_per_pixel());
  const SystemMatrix sm = build_system_matrix(geom);

  const QuboModel q1 = build_q1(sino, sm, scheme, map);
  const QuboModel q2 = build_q2(scheme, map);
  const QuboModel model = combine(q1, q2, a.a, a.b);

  Json meta;
  meta["a"] = a.a;
  meta["b"] = a.b;
  meta["encoding"] = to_string(scheme.kind());
  meta["levels"] = scheme.levels();
  meta["m1"] = scheme.m1();
  meta["m2"] = scheme.m2();
  meta["coefficients"] = scheme.coefficients();
  meta["image_width"] = map.width();
  meta["image_height"] = map.height();
  meta["bits_per_pixel"] = map.bits_per_pixel();
  meta["num_vars"] = model.num_vars();
  meta["projections"] = geom.num_angles();
  meta["sinogram"] = sino_path.filename().string();
  meta["noisy"] = a.noisy;

  const fs::path phantom_path = resolve(c, a.phantom, kPhantomCsv);
  if (fs::exists(phantom_path)) {
    const Image phantom = load_image(phantom_path);
    if (phantom.rows() != geom.image_height || phantom.cols() != geom.image_width)
      throw ValidationError("phantom dimensions do not match geometry.json");
    try {
      const Bits truth = encode_ground_truth(phantom, scheme);
      meta["truth_energy"] = energy(model, truth);
    } catch (const EncodingError& e) {
      throw ValidationError(std::string("encoding cannot represent the phantom: ") + e.what());
    }
    // Target from the exact projection, independent of the QUBO assembly.
    const Sinogram ideal = forward_project(phantom, sm);
    meta["sum_p_squared"] = ideal.squaredNorm();
    meta["phantom_tv_squared"] = tv_squared(phantom);
    meta["phantom_tv_absolute"] = tv_absolute(phantom);
    meta["target_energy"] = target_energy(phantom, ideal, a.a, a.b);
  } else {
    meta["target_energy"] = nullptr;
  }

  ensure_dir(c);
  export_qubo(model, fs::path(c.dir) / kQubo);
  write_json(fs::path(c.dir) / kQuboMeta, meta);

  Json p;
  p["a"] = a.a;
  p["b"] = a.b;
  p["encoding"] = a.encoding;
  p["levels"] = levels;
  p["m1"] = a.m1;
  p["m2"] = a.m2;
  p["sinogram"] = sino_path.filename().string();
  p["noisy"] = a.noisy;
  write_provenance(c.dir, "build", p);
  out << "QUBO with " << model.num_vars() << " variables and " << model.quadratic().nonZeros()
      << " couplings written to " << c.dir << "\n";
  return kOk;
}

int cmd_solve(const Common& c, const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const QuboModel model = import_qubo(fs::path(c.dir) / kQubo);
  SolveResult result;
  if (a.exact) {
    result = brute_force(model);
  } else {
    SolveConfig cfg;
    cfg.restarts = a.restarts;
    cfg.sweeps_per_restart = a.sweeps;
    cfg.seed = a.seed;
    cfg.initial_temperature = a.t0;
    cfg.final_temperature = a.t1;
    cfg.threads = a.threads;
    if (a.time_limit_ms) cfg.time_limit = std::chrono::milliseconds(*a.time_limit_ms);
    cfg.on_restart = [&err](int r, double e) {
      err << "restart " << r << " best energy " << format_real(e) << "\n";
    };
    result = anneal(model, cfg);
  }
  write_text(fs::path(c.dir) / kSolve, solve_result_to_json(result, a.timing) + "\n");

  Json p;
  p["exact"] = a.exact;
  p["restarts"] = a.restarts;
  p["sweeps"] = a.sweeps;
  p["seed"] = a.seed;
  p["t0"] = a.t0 ? Json(*a.t0) : Json(nullptr);
  p["t1"] = a.t1 ? Json(*a.t1) : Json(nullptr);
  p["time_limit_ms"] = a.time_limit_ms ? Json(*a.time_limit_ms) : Json(nullptr);
  write_provenance(c.dir, "solve", p);
  out << "best energy " << format_real(result.best_energy) << "\n";
  return kOk;
}

int cmd_reconstruct(const Common& c, const ReconstructArgs& a, std::ostream& out) {
  const Json meta = read_json(fs::path(c.dir) / kQuboMeta);
  const SolveResult result = solve_result_from_json(read_text(fs::path(c.dir) / kSolve));
  const EncodingScheme scheme =
      make_scheme(meta.at("encoding").get<std::string>(), meta.at("levels").get<std::vector<double>>(),
                  meta.at("m1").get<int>(), meta.at("m2").get<int>());
  const VariableMap map(meta.at("image_width").get<int>(), meta.at("image_height").get<int>(),
                        scheme.bits_per_pixel());
  const Image recon = decode(result.best_bits, scheme, map);

  const double b = meta.at("b").get<double>();
  const std::string label = a.label.empty() ? (b > 0.0 ? "qcstr" : "qtr") : a.label;
  save_image(recon, fs::path(c.dir) / ("recon_" + label + ".csv"));

  Json side;
  side["method"] = label;
  side["projections"] = meta.at("projections");
  side["a"] = meta.at("a");
  side["b"] = meta.at("b");
  side["achieved_energy"] = result.best_energy;
  side["target_energy"] = meta.at("target_energy");
  write_json(fs::path(c.dir) / ("recon_" + label + ".json"), side);

  Json p;
  p["label"] = label;
  write_provenance(c.dir, "reconstruct", p);
  out << "reconstruction written to recon_" << label << ".csv\n";
  return kOk;
}

int cmd_baseline(const Common& c, const BaselineArgs& a, std::ostream& out) {
  if (a.method != "fbp" && a.method != "sart" && a.method != "all")
    throw std::invalid_argument("--method must be fbp, sart or all");
  const ProjectionGeometry geom = geometry_from_json(read_json(fs::path(c.dir) / kGeometry));
  const Sinogram sino = load_sinogram(fs::path(c.dir) / (a.noisy ? kNoisySinogram : kSinogram));

  auto emit = [&](const std::string& label, const Image& img) {
    save_image(img, fs::path(c.dir) / ("recon_" + label + ".csv"));
    Json side;
    side["method"] = label;
    side["projections"] = geom.num_angles();
    write_json(fs::path(c.dir) / ("recon_" + label + ".json"), side);
    out << "reconstruction written to recon_" << label << ".csv\n";
  };
  if (a.method == "fbp" || a.method == "all") emit("fbp", fbp(sino, geom));
  if (a.method == "sart" || a.method == "all")
    emit("sart", sart(sino, build_system_matrix(geom), SartConfig{a.iterations, a.relaxation}));

  Json p;
  p["method"] = a.method;
  p["iterations"] = a.iterations;
  p["relaxation"] = a.relaxation;
  p["noisy"] = a.noisy;
  write_provenance(c.dir, "baseline", p);
  return kOk;
}

int cmd_compare(const Common& c, const CompareArgs& a, std::ostream& out) {
  const fs::path truth_path = resolve(c, a.truth, kPhantomCsv);
  const Image truth = load_image(truth_path);

  std::vector<std::string> labels;
  if (fs::is_directory(c.dir)) {
    for (const auto& entry : fs::directory_iterator(c.dir)) {
      const std::string name = entry.path().filename().string();
      if (name.starts_with("recon_") && name.ends_with(".csv"))
        labels.push_back(name.substr(6, name.size() - 10));
    }
  }
  if (labels.empty())
    throw IoError("no reconstructions found: expected " + (fs::path(c.dir) / "recon_<method>.csv").string());
  const std::vector<std::string> preferred{"qcstr", "qtr", "sart", "fbp"};
  auto rank = [&](const std::string& l) {
    const auto it = std::find(preferred.begin(), preferred.end(), l);
    return static_cast<std::size_t>(it - preferred.begin());
  };
  std::sort(labels.begin(), labels.end(), [&](const std::string& x, const std::string& y) {
    return std::pair(rank(x), x) < std::pair(rank(y), y);
  });

  std::vector<ReconstructionReport> reports;
  for (const auto& label : labels) {
    const Image recon = parse_csv_image(read_text(fs::path(c.dir) / ("recon_" + label + ".csv")));
    if (recon.rows() != truth.rows() || recon.cols() != truth.cols())
      throw ValidationError("recon_" + label + ".csv dimensions differ from the phantom");
    int projections = 0;
    double wa = 0.0, wb = 0.0;
    std::optional<double> achieved, target;
    const fs::path side = fs::path(c.dir) / ("recon_" + label + ".json");
    if (fs::exists(side)) {
      const Json s = read_json(side);
      projections = s.value("projections", 0);
      wa = s.value("a", 0.0);
      wb = s.value("b", 0.0);
      if (s.contains("achieved_energy") && s["achieved_energy"].is_number())
        achieved = s["achieved_energy"].get<double>();
      if (s.contains("target_energy") && s["target_energy"].is_number())
        target = s["target_energy"].get<double>();
    }
    const std::string scenario =
        !a.scenario.empty() ? a.scenario : std::to_string(projections) + " projections";
    reports.push_back(make_report(label, scenario, recon, truth, projections, wa, wb, achieved, target));
  }

  write_text(fs::path(c.dir) / kCompareJson, reports_to_json(reports) + "\n");
  const std::string table = reports_to_table(reports);
  write_text(fs::path(c.dir) / kCompareText, table);
  out << table;
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Few-projection tomographic reconstruction through QUBO models", "tomoqubo"};
  app.set_version_flag("--version", TOMOQUBO_VERSION);
  app.require_subcommand(1);

  Common common;
  auto add_dir = [&common](CLI::App* sub) {
    sub->add_option("--dir", common.dir, "Working directory for pipeline artifacts")
        ->capture_default_str();
  };

  PhantomArgs pa;
  auto* phantom = app.add_subcommand("phantom", "Generate a quantized phantom image");
  add_dir(phantom);
  phantom->add_option("--kind", pa.kind, "shepp-logan or image")->capture_default_str();
  phantom->add_option("--size", pa.size, "Output width and height in pixels")->required()->check(CLI::Range(2, 4096));
  phantom->add_option("--levels", pa.levels, "Comma-separated MAC levels")->delimiter(',')->capture_default_str();
  phantom->add_option("--blur", pa.blur, "Gaussian blur sigma in pixels")->check(CLI::NonNegativeNumber)->capture_default_str();
  phantom->add_option("--thresholds", pa.thresholds, "Comma-separated quantization thresholds")->delimiter(',');
  phantom->add_option("--input", pa.input, "Source image (PGM or CSV) for --kind image");
  phantom->add_option("--oversample", pa.oversample, "Raster oversampling before resize")->capture_default_str();

  ProjectArgs pr;
  auto* project = app.add_subcommand("project", "Forward project a phantom into a sinogram");
  add_dir(project);
  project->add_option("--in", pr.input, "Phantom image (default <dir>/phantom.csv)");
  project->add_option("--projections", pr.projections, "Number of isometric angles")->required()->check(CLI::PositiveNumber);
  project->add_option("--noise", pr.noise, "Relative Gaussian noise level")->check(CLI::NonNegativeNumber)->capture_default_str();
  project->add_option("--seed", pr.seed, "Noise seed")->capture_default_str();
  project->add_option("--bins", pr.bins, "Detector bins (default covers the diagonal)");
  project->add_option("--bin-width", pr.bin_width, "Detector bin spacing in pixels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  BuildArgs ba;
  auto* build = app.add_subcommand("build", "Assemble the combined QUBO a*Q1 + b*Q2");
  add_dir(build);
  build->add_option("--a", ba.a, "Data-fidelity weight")->capture_default_str();
  build->add_option("--b", ba.b, "Total-variation weight")->capture_default_str();
  build->add_option("--encoding", ba.encoding, "radix2, mac or mac_difference")->capture_default_str();
  build->add_option("--levels", ba.levels, "MAC levels (default from phantom provenance)")->delimiter(',');
  build->add_option("--m1", ba.m1, "radix2 lowest exponent is -m1")->capture_default_str();
  build->add_option("--m2", ba.m2, "radix2 highest exponent")->capture_default_str();
  build->add_option("--sinogram", ba.sinogram, "Sinogram CSV (default <dir>/sinogram.csv)");
  build->add_flag("--noisy", ba.noisy, "Use <dir>/sinogram_noisy.csv");
  build->add_option("--phantom", ba.phantom, "Phantom for the target energy (default <dir>/phantom.csv)");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Minimize the QUBO");
  add_dir(solve);
  solve->add_option("--restarts", sa.restarts)->check(CLI::PositiveNumber)->capture_default_str();
  solve->add_option("--sweeps", sa.sweeps, "Sweeps per restart")->check(CLI::PositiveNumber)->capture_default_str();
  solve->add_option("--seed", sa.seed)->capture_default_str();
  solve->add_option("--t0", sa.t0, "Initial temperature (default auto)");
  solve->add_option("--t1", sa.t1, "Final temperature (default auto)");
  solve->add_option("--threads", sa.threads, "Worker threads (0 = all cores)")->capture_default_str();
  solve->add_option("--time-limit-ms", sa.time_limit_ms, "Wall-clock cap");
  solve->add_flag("--exact", sa.exact, "Brute force (at most 24 variables)");
  solve->add_flag("--timing", sa.timing, "Record elapsed_ms in solve.json");

  ReconstructArgs ra;
  auto* reconstruct = app.add_subcommand("reconstruct", "Decode the solver bits into an image");
  add_dir(reconstruct);
  reconstruct->add_option("--label", ra.label, "Method label (default qcstr, or qtr when b = 0)");

  BaselineArgs bl;
  auto* baseline = app.add_subcommand("baseline", "Classical FBP / SART reconstructions");
  add_dir(baseline);
  baseline->add_option("--method", bl.method, "fbp, sart or all")->capture_default_str();
  baseline->add_option("--iterations", bl.iterations, "SART iterations")->capture_default_str();
  baseline->add_option("--relaxation", bl.relaxation, "SART relaxation")->capture_default_str();
  baseline->add_flag("--noisy", bl.noisy, "Use <dir>/sinogram_noisy.csv");

  CompareArgs ca;
  auto* compare = app.add_subcommand("compare", "Absolute-error report over all reconstructions");
  add_dir(compare);
  compare->add_option("--truth", ca.truth, "Reference image (default <dir>/phantom.csv)");
  compare->add_option("--scenario", ca.scenario, "Row label for the report");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*phantom) return cmd_phantom(common, pa, out);
    if (*project) return cmd_project(common, pr, out);
    if (*build) return cmd_build(common, ba, out);
    if (*solve) return cmd_solve(common, sa, out, err);
    if (*reconstruct) return cmd_reconstruct(common, ra, out);
    if (*baseline) return cmd_baseline(common, bl, out);
    if (*compare) return cmd_compare(common, ca, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kUsage;
}

}  // namespace tomoqubo::cli
