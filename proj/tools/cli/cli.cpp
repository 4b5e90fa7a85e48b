#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "../common/options.hpp"
#include "gperiods/error.hpp"
#include "gperiods/fillout.hpp"
#include "gperiods/io.hpp"
#include "gperiods/numtheory.hpp"
#include "gperiods/periods.hpp"
#include "gperiods/png_io.hpp"
#include "gperiods/render.hpp"

namespace gp::cli {

namespace {

using nlohmann::json;

/// Bad input, reported as one line naming the flag, exit 2.
struct UsageError : std::runtime_error {
  UsageError(std::string flag_name, std::string_view code, const std::string& message)
      : std::runtime_error(message), flag(std::move(flag_name)), code(code) {}
  std::string flag;
  std::string code;
};

[[noreturn]] void usage(std::string flag, Errc code, const std::string& message) {
  throw UsageError(std::move(flag), to_string(code), message);
}

struct Flags {
  std::uint64_t n = 0;
  std::int64_t omega = 0;
  std::uint64_t c = 1;
  std::string mode = "standard";
  unsigned threads = 0;
  std::string out;

  std::uint32_t width = 1024;
  std::uint32_t height = 1024;
  double radius = 1.0;
  double margin = 0.05;
  std::string palette;
  std::string background = "#ffffffff";
  std::string layer_order;
  std::string layers_dir;

  double epsilon = 0.0;  // 0 = 0.05 * d
  std::size_t samples = 1000000;
  std::uint64_t seed = kDefaultSampleSeed;
  std::string strategy = "grid";

  double tol = 1e-8;
};

std::string flag_for(Errc code) {
  switch (code) {
    case Errc::not_coprime: return "--omega";
    case Errc::not_divisor: return "--c";
    case Errc::too_large: return "--n";
    case Errc::invalid_dimension: return "--width/--height";
    case Errc::palette_too_small: return "--palette";
    default: return "";
  }
}

PeriodParams checked_params(const Flags& f) {
  if (f.n == 0) usage("--n", Errc::invalid_argument, "n must be a positive integer");
  try {
    return PeriodParams::make(f.n, f.omega);
  } catch (const Error& e) {
    usage(flag_for(e.code()), e.code(), e.what());
  }
}

ColorMode checked_mode(const Flags& f) {
  try {
    return parse_color_mode(f.mode);
  } catch (const Error& e) {
    usage("--mode", e.code(), e.what());
  }
}

void check_coloring(const Flags& f) {
  if (f.c == 0 || f.n % f.c != 0) {
    usage("--c", Errc::not_divisor, "c = " + std::to_string(f.c) + " does not divide n = " + std::to_string(f.n));
  }
}

RenderSpec checked_spec(const Flags& f) {
  RenderSpec spec;
  if (f.width == 0 || f.width > kMaxCanvasSide) {
    usage("--width", Errc::invalid_dimension, "width must lie in [1, " + std::to_string(kMaxCanvasSide) + "]");
  }
  if (f.height == 0 || f.height > kMaxCanvasSide) {
    usage("--height", Errc::invalid_dimension, "height must lie in [1, " + std::to_string(kMaxCanvasSide) + "]");
  }
  if (!(f.margin >= 0.0 && f.margin < 1.0)) usage("--margin", Errc::invalid_argument, "margin must lie in [0, 1)");
  if (!(f.radius >= 0.0 && f.radius <= 1024.0)) {
    usage("--radius", Errc::invalid_argument, "radius must lie in [0, 1024]");
  }
  spec.width = f.width;
  spec.height = f.height;
  spec.margin = f.margin;
  spec.point_radius = f.radius;
  spec.threads = f.threads;
  try {
    spec.palette = tools::parse_palette(f.palette);
  } catch (const Error& e) {
    usage("--palette", e.code(), e.what());
  }
  try {
    spec.background = tools::parse_rgba(f.background);
  } catch (const Error& e) {
    usage("--background", e.code(), e.what());
  }
  try {
    spec.layer_order = tools::parse_id_list(f.layer_order);
  } catch (const Error& e) {
    usage("--layer-order", e.code(), e.what());
  }
  return spec;
}

/// Palette and layer order can only be checked once the class count is known.
void check_spec_against(const RenderSpec& spec, const PeriodSet& set) {
  if (!spec.palette.empty() && spec.palette.size() < set.class_count) {
    usage("--palette", Errc::palette_too_small,
          "palette has " + std::to_string(spec.palette.size()) + " colors but there are " +
              std::to_string(set.class_count) + " classes");
  }
  if (!spec.layer_order.empty()) {
    auto sorted = spec.layer_order;
    std::sort(sorted.begin(), sorted.end());
    bool ok = sorted.size() == set.class_count;
    for (std::size_t i = 0; ok && i < sorted.size(); ++i) ok = sorted[i] == i;
    if (!ok) {
      usage("--layer-order", Errc::invalid_argument,
            "layer order must be a permutation of 0.." + std::to_string(set.class_count - 1));
    }
  }
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream file(path, std::ios::binary);
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  file.close();
  if (!file) throw Error(Errc::io_error, "cannot write " + path.string());
}

bool ends_with_ci(std::string_view s, std::string_view suffix) {
  if (s.size() < suffix.size()) return false;
  return std::equal(suffix.begin(), suffix.end(), s.end() - static_cast<std::ptrdiff_t>(suffix.size()),
                    [](char a, char b) { return std::tolower(static_cast<unsigned char>(a)) == b; });
}

PeriodSet compute_set(const Flags& f) {
  (void)checked_params(f);
  const ColorMode mode = checked_mode(f);
  check_coloring(f);
  ComputeOptions opts;
  opts.threads = f.threads;
  return compute_period_set(f.n, f.omega, f.c, mode, opts);
}

int cmd_compute(const Flags& f, std::ostream& out) {
  const PeriodSet set = compute_set(f);
  const bool as_json = ends_with_ci(f.out, ".json");
  const std::string text = as_json ? to_json(set) : to_csv(set);
  if (f.out.empty() || f.out == "-") {
    out << text;
    return kExitOk;
  }
  write_file(f.out, text);
  out << "wrote " << set.orbits.size() << " orbits (d = " << set.params.d << ", " << set.class_count
      << " classes) to " << f.out << "\n";
  return kExitOk;
}

int cmd_render(const Flags& f, std::ostream& out) {
  if (f.out.empty()) usage("--out", Errc::invalid_argument, "render needs an output PNG path");
  const RenderSpec spec = checked_spec(f);
  const PeriodSet set = compute_set(f);
  check_spec_against(spec, set);

  const Image image = rasterize(set, spec);
  const auto png = encode_png(image);
  write_file(f.out, std::string_view(reinterpret_cast<const char*>(png.data()), png.size()));
  write_file(f.out + ".json", render_sidecar_json(set, spec));
  out << "wrote " << f.out << " (" << spec.width << "x" << spec.height << ", " << set.orbits.size() << " points)\n";

  if (!f.layers_dir.empty()) {
    const auto paths = export_layers(set, spec, f.layers_dir);
    out << "wrote " << paths.size() << " layers to " << f.layers_dir << "\n";
  }
  return kExitOk;
}

/// Definitional sum in long double, independent of the library's evaluator.
std::complex<long double> direct_period(const PeriodParams& p, std::uint64_t k) {
  std::complex<long double> sum = 0;
  std::uint64_t x = k % p.n;
  for (std::uint64_t j = 0; j < p.d; ++j) {
    const long double angle = 2 * std::numbers::pi_v<long double> * static_cast<long double>(x) / p.n;
    sum += std::complex<long double>(std::cos(angle), std::sin(angle));
    x = mul_mod(x, p.omega, p.n);
  }
  return sum;
}

int cmd_verify(const Flags& f, std::ostream& out) {
  if (!(f.tol > 0.0)) usage("--tol", Errc::invalid_argument, "tolerance must be positive");
  const PeriodSet set = compute_set(f);
  const PeriodParams& p = set.params;
  const std::uint64_t fold = dihedral_order(p.n, static_cast<std::int64_t>(p.omega));
  const DihedralReport dihedral = verify_dihedral(set, fold, f.tol);

  // Spot-check evenly spaced orbits against the direct sum, within a fixed work budget.
  constexpr std::uint64_t kTermBudget = 20000000;
  const std::uint64_t wanted = std::min<std::uint64_t>(32, set.orbits.size());
  const std::uint64_t spots = std::min(wanted, kTermBudget / p.d);
  double spot_error = 0.0;
  json spot_list = json::array();
  for (std::uint64_t s = 0; s < spots; ++s) {
    const OrbitRecord& rec = set.orbits[s * set.orbits.size() / spots];
    const auto ref = direct_period(p, rec.rep);
    const double err = static_cast<double>(std::abs(std::complex<long double>(rec.value) - ref));
    spot_error = std::max(spot_error, err);
    spot_list.push_back({{"k", rec.rep}, {"error", err}});
  }

  std::uint64_t rescale_count = 0;
  bool rescale_holds = true;
  double rescale_error = 0.0;
  for (std::uint64_t s = 1; s <= 16 && p.n > 1 && p.d <= kTermBudget / 32; ++s) {
    const std::uint64_t k = std::max<std::uint64_t>(1, s * (p.n - 1) / 16);
    const RescaleCheck r = rescale_identity_check(p.n, static_cast<std::int64_t>(p.omega), k, f.tol);
    ++rescale_count;
    rescale_holds = rescale_holds && r.holds;
    rescale_error = std::max(rescale_error, r.error);
  }

  json report;
  report["params"] = {{"n", p.n}, {"omega", p.omega}, {"d", p.d}, {"c", set.c}, {"mode", to_string(set.mode)}};
  report["orbit_count"] = set.orbits.size();
  report["class_count"] = set.class_count;
  report["tolerance"] = f.tol;
  report["dihedral_order"] = fold;
  report["holds"] = dihedral.holds;
  report["max_mismatch"] = dihedral.max_mismatch;
  report["oracle_spot_checks"] = {{"count", spots},
                                  {"max_error", spot_error},
                                  {"holds", spot_error <= f.tol},
                                  {"checks", spot_list}};
  report["rescale_checks"] = {{"count", rescale_count}, {"holds", rescale_holds}, {"max_error", rescale_error}};
  if (set.c > 1) {
    report["subplot_containment"] = {
        {"c", set.c},
        {"holds", subplot_containment_check(p.n, static_cast<std::int64_t>(p.omega), set.c, f.tol)}};
  }

  const std::string text = report.dump(2) + "\n";
  if (f.out.empty() || f.out == "-") {
    out << text;
  } else {
    write_file(f.out, text);
    out << "wrote " << f.out << " (holds = " << (dihedral.holds ? "true" : "false") << ")\n";
  }
  return kExitOk;
}

int cmd_fillout(const Flags& f, std::ostream& out) {
  const PeriodParams p = checked_params(f);
  if (f.epsilon < 0.0 || !std::isfinite(f.epsilon)) {
    usage("--epsilon", Errc::invalid_argument, "epsilon must be positive");
  }
  if (f.samples == 0) usage("--samples", Errc::invalid_argument, "samples must be positive");
  SampleOptions opts;
  if (f.strategy == "grid") {
    opts.strategy = SampleStrategy::grid;
  } else if (f.strategy == "random") {
    opts.strategy = SampleStrategy::random;
  } else {
    usage("--strategy", Errc::invalid_argument, "strategy must be grid or random");
  }
  opts.seed = f.seed;
  opts.threads = f.threads;
  const double epsilon = f.epsilon > 0.0 ? f.epsilon : 0.05 * static_cast<double>(p.d);

  const Applicability app = applicability_check(p.n, static_cast<std::int64_t>(p.omega));
  ComputeOptions copts;
  copts.threads = f.threads;
  const OrbitTable table = compute_orbits(p.n, static_cast<std::int64_t>(p.omega), copts);
  const LaurentMap map(p.d);
  CoverageReport cov;
  try {
    cov = coverage(values_of(table.orbits), map, epsilon, f.samples, opts);
  } catch (const Error& e) {
    if (e.code() == Errc::too_large) usage("--samples", e.code(), e.what());
    throw;
  }

  json report;
  report["params"] = {{"q", p.n}, {"omega", p.omega}, {"d", p.d}, {"arity", map.arity()}};
  report["applicability"] = json::parse(to_json(app));
  report["coverage"] = json::parse(to_json(cov));
  const std::string text = report.dump(2) + "\n";
  if (f.out.empty() || f.out == "-") {
    out << text;
  } else {
    write_file(f.out, text);
    out << "wrote " << f.out << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian periods: compute, render, verify and fill-out analysis", "gperiods"};
  app.require_subcommand(1);
  Flags f;

  auto add_params = [&f](CLI::App* sub, bool coloring) {
    sub->add_option("--n", f.n, "modulus n")->required();
    sub->add_option("--omega", f.omega, "multiplier omega, coprime to n")->required();
    if (coloring) {
      sub->add_option("--c", f.c, "coloring modulus, a divisor of n")->capture_default_str();
      sub->add_option("--mode", f.mode, "coloring mode: standard or period-squared")->capture_default_str();
    }
    sub->add_option("--threads", f.threads, "worker threads, 0 = all cores")->capture_default_str();
  };

  auto* compute = app.add_subcommand("compute", "write the orbit table as CSV (or JSON for a .json path)");
  add_params(compute, true);
  compute->add_option("--out", f.out, "output path, '-' or omitted for stdout");

  auto* render = app.add_subcommand("render", "rasterize the point set to PNG");
  add_params(render, true);
  render->add_option("--out", f.out, "PNG path; a .json sidecar is written next to it")->required();
  render->add_option("--width", f.width, "canvas width in pixels")->capture_default_str();
  render->add_option("--height", f.height, "canvas height in pixels")->capture_default_str();
  render->add_option("--radius", f.radius, "point radius in pixels")->capture_default_str();
  render->add_option("--margin", f.margin, "empty fraction around the plot")->capture_default_str();
  render->add_option("--palette", f.palette, "comma-separated #rrggbb[aa] colors, one per class");
  render->add_option("--background", f.background, "background #rrggbb[aa]")->capture_default_str();
  render->add_option("--layer-order", f.layer_order, "comma-separated class ids, drawn first to last");
  render->add_option("--layers-dir", f.layers_dir, "also write layer_<class>.png files here");

  auto* verify = app.add_subcommand("verify", "check the dihedral law and spot-check values");
  add_params(verify, true);
  verify->add_option("--tol", f.tol, "tolerance")->capture_default_str();
  verify->add_option("--out", f.out, "report path, '-' or omitted for stdout");

  auto* fillout = app.add_subcommand("fillout", "coverage of the Laurent image by G(q, omega); --n is q");
  add_params(fillout, false);
  fillout->add_option("--epsilon", f.epsilon, "coverage radius (default 0.05 d)");
  fillout->add_option("--samples", f.samples, "image samples")->capture_default_str();
  fillout->add_option("--seed", f.seed, "seed for random sampling")->capture_default_str();
  fillout->add_option("--strategy", f.strategy, "grid or random")->capture_default_str();
  fillout->add_option("--out", f.out, "report path, '-' or omitted for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "gperiods: error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (compute->parsed()) return cmd_compute(f, out);
    if (render->parsed()) return cmd_render(f, out);
    if (verify->parsed()) return cmd_verify(f, out);
    return cmd_fillout(f, out);
  } catch (const UsageError& e) {
    err << "gperiods: error: " << e.flag << ": " << e.code << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    const std::string flag = flag_for(e.code());
    if (!flag.empty() || e.code() == Errc::invalid_argument) {
      err << "gperiods: error: " << (flag.empty() ? "" : flag + ": ") << to_string(e.code()) << ": " << e.what()
          << "\n";
      return kExitUsage;
    }
    err << "gperiods: error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "gperiods: error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace gp::cli
