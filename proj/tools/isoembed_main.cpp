#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "isoembed/config.hpp"
#include "isoembed/export.hpp"
#include "isoembed/pipeline.hpp"

namespace {

using namespace isoembed;

constexpr const char* kDefaultConfig = R"({"n": 2, "metric": "identity", "oracle": "clifford"})";

constexpr const char* kExpressionHelp = R"(
Expressions (metric entries, conformal exponent, oracle components):
  variables x1..xn, constant pi, numbers such as 2, 0.5, 1e-3
  binary + - * / ^ (^ binds tighter than * and /, and groups left to right)
  unary minus, parentheses, functions sin cos exp log sqrt
  example: "1 + 0.3*sin(2*pi*x1)^2")";

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::string map = "E";
  std::string format = "csv";
  std::optional<double> window;
  std::string out;
  bool timings = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot read '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit(const Options& opts, const std::string& text) {
  if (opts.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.out, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", opts.out));
  out << text;
}

RunConfig load(const Options& opts) {
  RunConfig config = parse_config(opts.config_path.empty() ? std::string(kDefaultConfig)
                                                           : read_file(opts.config_path));
  if (opts.seed) config.verify.seed = *opts.seed;
  return config;
}

const AmbientMap& pick_map(const Pipeline& p, const std::string& name) {
  if (name == "E") return p.E;
  if (name == "F") return p.F;
  throw Error(fmt::format("unknown map '{}', expected E or F", name));
}

int run_split(const Options& opts) {
  const RunConfig config = load(opts);
  const MetricSplit split =
      split_metric(build_metric(config), config.split.fraction, config.split.resolution);
  std::cout << fmt::format("metric {} n={} group {}\n", to_string(split.field.family()), config.n,
                           split.field.symmetry().name);
  std::cout << fmt::format("min eigenvalue {:.17g} (grid {}^{})\n", split.min_eigenvalue,
                           split.resolution, config.n);
  std::cout << fmt::format("c {:.17g}\nmargin {:.17g}\n", split.c, split.margin);
  return 0;
}

int run_embed(const Options& opts) {
  RunConfig config = load(opts);
  if (opts.samples) config.verify.samples = *opts.samples;
  const Pipeline p = build_pipeline(config);
  const AmbientMap& map = pick_map(p, opts.map);
  const EmbeddingOracle& oracle = p.oracle.oracle();
  std::cout << fmt::format("map {}\n", opts.map);
  std::cout << fmt::format("oracle {} N={} R_Phi {:.17g} residual {:.3g}\n", oracle.name(),
                           oracle.ambient_dimension(), oracle.image_radius(), p.oracle.residual());
  std::cout << fmt::format("n {}\nD {}\nc {:.17g}\n", config.n, map.ambient_dimension(), p.split.c);
  if (map.image_radius())
    std::cout << fmt::format("bound {:.17g}\n", *map.image_radius());
  else
    std::cout << "bound none (unbounded)\n";
  return 0;
}

int run_verify(const Options& opts) {
  RunConfig config = load(opts);
  if (opts.samples) config.verify.samples = *opts.samples;
  const Pipeline p = build_pipeline(config);
  const VerificationReport report = run_verification(p);
  emit(opts, report.serialize(opts.timings));
  if (!opts.out.empty()) {
    for (const auto& c : report.checks())
      std::cerr << fmt::format("{} {} residual {:.3g} tolerance {:.3g}\n", c.pass ? "PASS" : "FAIL",
                               c.name, c.max_residual, c.tolerance);
    for (const auto& s : report.skipped()) std::cerr << fmt::format("SKIP {} {}\n", s.name, s.reason);
  }
  return report.pass() ? 0 : 1;
}

int run_export(const Options& opts) {
  RunConfig config = load(opts);
  if (opts.window) config.exports.window = *opts.window;
  if (opts.samples) config.exports.samples = *opts.samples;
  const std::string hash = sha256_hex(to_json(config).dump());
  const Pipeline p = build_pipeline(config);
  if (opts.map == "spiral") {
    if (opts.format != "csv") throw Error("the spiral exports as csv only");
    emit(opts, export_spiral_csv(p.curve, config.exports.window, config.exports.samples));
    return 0;
  }
  const AmbientMap& map = pick_map(p, opts.map);
  if (opts.format == "csv") {
    const auto sampler = PointSampler::window(config.n, config.exports.window, config.verify.seed,
                                              config.exports.samples);
    emit(opts, export_csv(map, sampler));
  } else if (opts.format == "obj") {
    emit(opts, export_obj(map, config.exports.window, config.exports.resolution,
                          config.exports.coordinates, hash));
  } else {
    throw Error(fmt::format("unknown format '{}', expected csv or obj", opts.format));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isometric embeddings of flat-torus quotients into Euclidean space."};
  app.footer(kExpressionHelp);
  app.require_subcommand(1);
  app.fallthrough();

  Options opts;
  app.add_option("--config", opts.config_path, "JSON run config (default: identity metric, n = 2)");
  app.add_option("--seed", opts.seed, "Sampling seed, overrides verify.seed");
  app.add_option("--samples", opts.samples, "Sample count for verify or csv export");
  app.add_option("--map", opts.map, "E, F, or spiral (export only)");
  app.add_option("--format", opts.format, "csv or obj");
  app.add_option("--window", opts.window, "Export half-width");
  app.add_option("--out", opts.out, "Output file (default: stdout)");
  app.add_flag("--timings", opts.timings, "Include wall times in the report");

  auto* split = app.add_subcommand("split", "Print c and the margin of the split");
  auto* embed = app.add_subcommand("embed", "Construct E or F and summarize it");
  auto* verify = app.add_subcommand("verify", "Run the verification suite and write the report");
  auto* exporter = app.add_subcommand("export", "Write samples (csv) or a mesh (obj)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*split) return run_split(opts);
    if (*embed) return run_embed(opts);
    if (*verify) return run_verify(opts);
    if (*exporter) return run_export(opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
