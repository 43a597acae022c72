// Command-line frontend: exposes the density, moment, maxima, Euclidean,
// verification, and measure-scan computations as subcommands with CSV or
// JSON artifacts.  Every numeric column carries a route annotation
// (closed_form / quadrature / fit), the effective configuration is echoed
// into each artifact, and identical configurations produce byte-identical
// output.  Exit codes: 0 all requested checks pass, 1 a numerical check or
// evaluation failed, 2 invalid flags or configuration.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "areadist/verification.hpp"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace areadist;

// Configuration problems detected before dispatch; mapped to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double gamma = 1.0;
  unsigned precision_bits = 256;
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t k_max = 6;
  unsigned seed = 42;
  std::string format = "csv";
  std::string output;  // empty = stdout
};

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Artifact {
  std::string command;
  Json config = Json::object();
  std::vector<Json> records;
  std::vector<CheckResult> checks;
  std::vector<std::string> diagnostics;
  Json summary = Json::object();
};

std::string csv_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return fmt_double(v.get<double>());
  return v.dump();
}

std::string render_csv(const Artifact& art) {
  std::string out;
  out += "# tool areadist\n";
  out += "# command " + art.command + "\n";
  for (const auto& [key, value] : art.config.items())
    out += "# config " + key + " = " + csv_cell(value) + "\n";
  for (const auto& line : art.diagnostics) out += "# diagnostic " + line + "\n";
  if (!art.records.empty()) {
    std::string header;
    for (const auto& [key, value] : art.records.front().items()) {
      if (!header.empty()) header += ",";
      header += key;
    }
    out += header + "\n";
    for (const auto& record : art.records) {
      std::string row;
      for (const auto& [key, value] : record.items()) {
        if (!row.empty()) row += ",";
        row += csv_cell(value);
      }
      out += row + "\n";
    }
  }
  for (const auto& [key, value] : art.summary.items())
    out += "# summary " + key + " = " + csv_cell(value) + "\n";
  for (const auto& c : art.checks)
    out += std::string("# check ") + c.name + " route=" + route_label(c.route) +
           " residual=" + fmt_double(c.residual) +
           " tolerance=" + fmt_double(c.tolerance) +
           (c.pass ? " PASS" : " FAIL") + "\n";
  return out;
}

std::string render_json(const Artifact& art) {
  Json doc;
  doc["tool"] = "areadist";
  doc["command"] = art.command;
  doc["config"] = art.config;
  doc["records"] = art.records;
  if (!art.checks.empty()) {
    Json checks = Json::array();
    for (const auto& c : art.checks) {
      Json row;
      row["check"] = c.name;
      row["route"] = route_label(c.route);
      row["residual"] = c.residual;
      row["tolerance"] = c.tolerance;
      row["status"] = c.pass ? "PASS" : "FAIL";
      checks.push_back(std::move(row));
    }
    doc["checks"] = std::move(checks);
  }
  if (!art.diagnostics.empty()) doc["diagnostics"] = art.diagnostics;
  if (!art.summary.empty()) doc["summary"] = art.summary;
  return doc.dump(2) + "\n";
}

// Relative output paths land in AREADIST_OUTDIR when that is set.
std::string resolve_output_path(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* outdir = std::getenv("AREADIST_OUTDIR");
  if (outdir == nullptr || *outdir == '\0') return path;
  std::string dir(outdir);
  if (dir.back() != '/') dir += '/';
  return dir + path;
}

// Renders the artifact, writes it to the requested sink, and maps failed
// checks to exit code 1 with the failing residuals on stderr.
int finish(const Artifact& art, const RunConfig& cfg) {
  const std::string body = cfg.format == "json" ? render_json(art) : render_csv(art);
  const std::string path = resolve_output_path(cfg.output);
  if (path.empty()) {
    std::cout << body;
  } else {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "error: cannot open output file: " << path << "\n";
      return 1;
    }
    file << body;
  }
  int failed = 0;
  for (const auto& c : art.checks)
    if (!c.pass) {
      ++failed;
      std::cerr << "check failed: " << c.name << " residual=" << fmt_double(c.residual)
                << " exceeds tolerance=" << fmt_double(c.tolerance) << "\n";
    }
  return failed == 0 ? 0 : 1;
}

Json complex_json(const Complex& z) {
  Json j;
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

Json base_config(const RunConfig& cfg) {
  Json j;
  j["seed"] = cfg.seed;
  j["format"] = cfg.format;
  j["output"] = cfg.output.empty() ? "stdout" : cfg.output;
  return j;
}

Region parse_region(const std::string& name) {
  return name == "timelike" ? Region::timelike : Region::spacelike;
}

// --- moments ----------------------------------------------------------------

int run_moments(const RunConfig& cfg, const std::string& kind_name) {
  if (cfg.k_max > 30)
    throw ConfigError("k range exceeds the derivative-order budget (max 30)");
  const PrecisionConfig pc{cfg.precision_bits, 64};
  try {
    validate(pc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  QuadratureSpec spec;
  spec.abs_tol = cfg.abs_tol;
  spec.rel_tol = cfg.rel_tol;
  const GKind kind = kind_name == "arcsin" ? GKind::arcsin() : GKind::linear();
  const bool arcsin = kind_name == "arcsin";

  Artifact art;
  art.command = "moments";
  art.config = base_config(cfg);
  art.config["kind"] = kind_name;
  art.config["k_max"] = cfg.k_max;
  art.config["precision_bits"] = cfg.precision_bits;
  art.config["abs_tol"] = cfg.abs_tol;
  art.config["rel_tol"] = cfg.rel_tol;

  double route_worst = 0.0;
  double density_worst = 0.0;
  double ratio0 = 0.0;
  for (std::size_t k = 0; k <= cfg.k_max; ++k) {
    const MomentResult closed = to_unit_mass(moment_closed_form(k, kind, pc));
    const MomentResult generic = to_unit_mass(moment_generic(k, kind, pc));
    const double density =
        static_cast<double>(density_moment_quadrature(k, kind, spec).value);
    const double closed_d = static_cast<double>(closed.value);
    const double residual_routes = static_cast<double>(abs(closed.value - generic.value));
    route_worst = std::max(route_worst, residual_routes);

    Json row;
    row["k[closed_form]"] = k;
    row["moment_closed[closed_form]"] = closed_d;
    row["moment_generic[closed_form]"] = static_cast<double>(generic.value);
    row["moment_density[quadrature]"] = density;
    row["residual_routes[closed_form]"] = residual_routes;
    if (arcsin) {
      // The density route carries one global constant, fixed at k = 0.
      const double ratio = density / closed_d;
      if (k == 0) ratio0 = ratio;
      const double residual = std::abs(density - ratio0 * closed_d) / std::abs(density);
      row["density_to_closed_ratio[quadrature]"] = ratio;
      row["residual_constant[quadrature]"] = residual;
      density_worst = std::max(density_worst, residual);
    } else {
      const double residual =
          std::abs(density - closed_d) / std::max(1.0, std::abs(closed_d));
      row["residual_density[quadrature]"] = residual;
      density_worst = std::max(density_worst, residual);
    }
    art.records.push_back(std::move(row));
  }
  art.checks.push_back(
      areadist::detail::make_check("moment_route_agreement", CheckRoute::closed_form,
                                   route_worst, 1e-8));
  art.checks.push_back(areadist::detail::make_check(
      arcsin ? "density_constant_stability" : "density_route_agreement",
      CheckRoute::quadrature, density_worst, arcsin ? 1e-6 : 1e-8));
  return finish(art, cfg);
}

// --- density ----------------------------------------------------------------

int run_density(const RunConfig& cfg, const std::string& region_name, double tmin,
                double tmax, int points) {
  if (!(tmin >= 0.0) || !(tmax > tmin))
    throw ConfigError("require 0 <= tmin < tmax for the ray grid");
  if (points < 2) throw ConfigError("require at least 2 grid points");
  const GammaParam gp = [&] {
    try {
      return GammaParam(cfg.gamma);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  const Region region = parse_region(region_name);

  Artifact art;
  art.command = "density";
  art.config = base_config(cfg);
  art.config["gamma"] = cfg.gamma;
  art.config["region"] = region_name;
  art.config["tmin"] = tmin;
  art.config["tmax"] = tmax;
  art.config["points"] = points;

  for (int i = 0; i < points; ++i) {
    const double t = tmin + (tmax - tmin) * i / (points - 1);
    const DensityPoint p = n0_density(SquaredArea::on_ray(region, t), gp);
    Json row;
    row["abs_v[closed_form]"] = t;
    row["density[closed_form]"] = p.value;
    row["pole_distance[closed_form]"] = p.pole_distance;
    art.records.push_back(std::move(row));
  }
  return finish(art, cfg);
}

// --- euclidean-density -------------------------------------------------------

int run_euclidean(const RunConfig& cfg, double ge_re, double ge_im, double vmin,
                  double vmax, int points) {
  if (!(vmin >= 0.0) || !(vmax > vmin))
    throw ConfigError("require 0 <= vmin < vmax for the squared-area grid");
  if (points < 2) throw ConfigError("require at least 2 grid points");
  const Complex gamma_e(ge_re, ge_im);
  if (gamma_e == Complex(0.0, 0.0)) throw ConfigError("gamma-e must be nonzero");

  Artifact art;
  art.command = "euclidean-density";
  art.config = base_config(cfg);
  art.config["gamma_e"] = complex_json(gamma_e);
  art.config["vmin"] = vmin;
  art.config["vmax"] = vmax;
  art.config["points"] = points;

  for (int i = 0; i < points; ++i) {
    const double vp = vmin + (vmax - vmin) * i / (points - 1);
    for (int j = 0; j < points; ++j) {
      const double vm = vmin + (vmax - vmin) * j / (points - 1);
      const DensityPoint p = n0_euclidean(vp, vm, gamma_e);
      Json row;
      row["v_plus[closed_form]"] = vp;
      row["v_minus[closed_form]"] = vm;
      row["density[closed_form]"] = p.value;
      row["pole_distance[closed_form]"] = p.pole_distance;
      art.records.push_back(std::move(row));
    }
  }
  return finish(art, cfg);
}

// --- maxima -------------------------------------------------------------------

int run_maxima(const RunConfig& cfg, const std::string& region_name, int count,
               double floor) {
  if (count < 1) throw ConfigError("require at least one maximum to scan for");
  if (!(floor > 0.0) || !(floor < 1.0))
    throw ConfigError("prominence floor must lie in (0, 1)");
  const GammaParam gp = [&] {
    try {
      return GammaParam(cfg.gamma);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  const Region region = parse_region(region_name);

  Artifact art;
  art.command = "maxima";
  art.config = base_config(cfg);
  art.config["gamma"] = cfg.gamma;
  art.config["region"] = region_name;
  art.config["count"] = count;
  art.config["prominence_floor"] = floor;

  const MaximaScan scan = find_local_maxima(gp, region, count, floor);
  double ratio_sum = 0.0;
  for (std::size_t i = 0; i < scan.maxima.size(); ++i) {
    const LocalMaximum& m = scan.maxima[i];
    const double predicted = predicted_spectrum(gp, region, static_cast<int>(i + 1));
    const double ratio = m.location / predicted;
    ratio_sum += ratio;
    Json row;
    row["n[closed_form]"] = i + 1;
    row["location[fit]"] = m.location;
    row["prominence[fit]"] = m.prominence;
    row["density[closed_form]"] = m.value;
    row["predicted_spectrum[closed_form]"] = predicted;
    row["location_to_predicted[fit]"] = ratio;
    art.records.push_back(std::move(row));
  }
  if (scan.maxima.empty()) {
    art.diagnostics.push_back(
        "no maxima above prominence floor " + fmt_double(floor) +
        "; scanned up to |v| = " + fmt_double(scan.scan_limit) + " with step " +
        fmt_double(scan.grid_step));
  } else {
    art.summary["mean_location_to_predicted[fit]"] =
        ratio_sum / static_cast<double>(scan.maxima.size());
  }
  return finish(art, cfg);
}

// --- verify --------------------------------------------------------------------

int run_verify(const RunConfig& cfg) {
  Artifact art;
  art.command = "verify";
  art.config = base_config(cfg);
  art.checks = run_verification(cfg.seed);

  int passed = 0;
  for (const auto& c : art.checks) {
    if (c.pass) ++passed;
    std::printf("%s %-32s route=%-11s residual=%s tolerance=%s\n",
                c.pass ? "PASS" : "FAIL", c.name.c_str(), route_label(c.route),
                fmt_double(c.residual).c_str(), fmt_double(c.tolerance).c_str());
    Json row;
    row["check"] = c.name;
    row["route"] = route_label(c.route);
    row["residual"] = c.residual;
    row["tolerance"] = c.tolerance;
    row["status"] = c.pass ? "PASS" : "FAIL";
    art.records.push_back(std::move(row));
  }
  std::printf("verification: %d/%zu checks passed\n", passed, art.checks.size());

  if (cfg.output.empty()) {
    // The report above is the stdout artifact; still honor exit semantics.
    int failed = 0;
    for (const auto& c : art.checks)
      if (!c.pass) {
        ++failed;
        std::cerr << "check failed: " << c.name
                  << " residual=" << fmt_double(c.residual)
                  << " exceeds tolerance=" << fmt_double(c.tolerance) << "\n";
      }
    return failed == 0 ? 0 : 1;
  }
  return finish(art, cfg);
}

// --- measure-scan ----------------------------------------------------------------

int run_measure_scan(const RunConfig& cfg, const std::vector<int>& orders,
                     int decades, int samples) {
  for (const int n : orders)
    if (n < 0) throw ConfigError("moment order must be nonnegative");
  if (decades < 2) throw ConfigError("need at least 2 decades for the fit");
  if (samples < 8) throw ConfigError("need at least 8 samples per decade");

  Artifact art;
  art.command = "measure-scan";
  art.config = base_config(cfg);
  {
    Json list = Json::array();
    for (const int n : orders) list.push_back(n);
    art.config["orders"] = std::move(list);
  }
  art.config["decades"] = decades;
  art.config["samples_per_decade"] = samples;

  double worst = 0.0;
  for (const int n : orders) {
    const LengthMomentScan scan = length_moment_scan(n, decades, samples, cfg.seed);
    const char* verdict = scan.verdict == Convergence::convergent ? "convergent"
                          : scan.verdict == Convergence::marginal ? "marginal"
                                                                  : "divergent";
    const double denom = std::max(1.0, std::abs(scan.predicted_exponent));
    worst = std::max(worst,
                     std::abs(scan.fitted_exponent - scan.predicted_exponent) / denom);
    Json row;
    row["n[closed_form]"] = n;
    row["predicted_exponent[closed_form]"] = scan.predicted_exponent;
    row["fitted_exponent[fit]"] = scan.fitted_exponent;
    row["verdict[fit]"] = verdict;
    row["samples[closed_form]"] = scan.sample_count;
    row["eps_hi[closed_form]"] = scan.eps_hi;
    row["eps_lo[closed_form]"] = scan.eps_lo;
    art.records.push_back(std::move(row));
  }
  art.checks.push_back(areadist::detail::make_check("exponent_fits", CheckRoute::fit,
                                                    worst, 0.05));
  return finish(art, cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Area-tensor distribution and measure toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read option defaults from a TOML/INI file");

  RunConfig cfg;
  const auto add_common = [&](CLI::App* sub) {
    sub->fallthrough();  // lets --config appear after the subcommand name
    sub->add_option("--format", cfg.format, "Artifact format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--output", cfg.output,
                    "Output file (default stdout; relative paths land in "
                    "AREADIST_OUTDIR when set)");
    sub->add_option("--seed", cfg.seed, "Random seed for the seeded checks")
        ->capture_default_str();
  };

  // moments
  std::string kind = "linear";
  CLI::App* moments = app.add_subcommand(
      "moments", "Unit-mass moment table from all computation routes");
  moments->add_option("--kind", kind, "Profile kind")
      ->check(CLI::IsMember({"linear", "arcsin"}))
      ->capture_default_str();
  moments->add_option("--kmax", cfg.k_max, "Largest moment order")
      ->capture_default_str();
  moments->add_option("--precision-bits", cfg.precision_bits,
                      "Significand bits for the derivative routes")
      ->capture_default_str();
  moments->add_option("--abs-tol", cfg.abs_tol, "Quadrature absolute tolerance")
      ->capture_default_str();
  moments->add_option("--rel-tol", cfg.rel_tol, "Quadrature relative tolerance")
      ->capture_default_str();
  add_common(moments);

  // density
  std::string region = "spacelike";
  double tmin = 0.0, tmax = 8.0;
  int points = 81;
  CLI::App* density =
      app.add_subcommand("density", "Sample the area density along a physical ray");
  density->add_option("--gamma", cfg.gamma, "Sector weight parameter")
      ->capture_default_str();
  density->add_option("--region", region, "Physical ray")
      ->check(CLI::IsMember({"spacelike", "timelike"}))
      ->capture_default_str();
  density->add_option("--tmin", tmin, "Grid start |v|")->capture_default_str();
  density->add_option("--tmax", tmax, "Grid end |v|")->capture_default_str();
  density->add_option("--points", points, "Grid size")->capture_default_str();
  add_common(density);

  // euclidean-density
  double ge_re = 1.0, ge_im = 0.0, vmin = 0.0, vmax = 5.0;
  int epoints = 11;
  CLI::App* euclid = app.add_subcommand(
      "euclidean-density", "Sample the factorized Euclidean density on a grid");
  euclid->add_option("--gamma-e", ge_re, "Euclidean sector weight, real part")
      ->capture_default_str();
  euclid->add_option("--gamma-e-im", ge_im, "Euclidean sector weight, imaginary part")
      ->capture_default_str();
  euclid->add_option("--vmin", vmin, "Grid start")->capture_default_str();
  euclid->add_option("--vmax", vmax, "Grid end")->capture_default_str();
  euclid->add_option("--points", epoints, "Grid size per axis")
      ->capture_default_str();
  add_common(euclid);

  // maxima
  std::string mregion = "spacelike";
  int count = 5;
  double floor = 0.01;
  CLI::App* maxima = app.add_subcommand(
      "maxima", "Locate density maxima and compare against the predicted spectrum");
  maxima->add_option("--gamma", cfg.gamma, "Sector weight parameter")
      ->capture_default_str();
  maxima->add_option("--region", mregion, "Physical ray")
      ->check(CLI::IsMember({"spacelike", "timelike"}))
      ->capture_default_str();
  maxima->add_option("--n", count, "Number of leading maxima to scan for")
      ->capture_default_str();
  maxima->add_option("--prominence-floor", floor, "Minimum relative prominence")
      ->capture_default_str();
  add_common(maxima);

  // verify
  bool all = false;
  CLI::App* verify =
      app.add_subcommand("verify", "Run the full cross-module invariant suite");
  verify->add_flag("--all", all, "Run every check (the default and only mode)");
  add_common(verify);

  // measure-scan
  std::vector<int> orders;
  int decades = 4, samples = 4000;
  CLI::App* mscan = app.add_subcommand(
      "measure-scan", "Fit flattening exponents of the configuration measure");
  mscan->add_option("--n", orders, "Moment orders (repeatable)")
      ->capture_default_str();
  mscan->add_option("--decades", decades, "Flattening decades below 1e-4")
      ->capture_default_str();
  mscan->add_option("--samples", samples, "Monte Carlo samples per decade")
      ->capture_default_str();
  add_common(mscan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (moments->parsed()) return run_moments(cfg, kind);
    if (density->parsed()) return run_density(cfg, region, tmin, tmax, points);
    if (euclid->parsed()) return run_euclidean(cfg, ge_re, ge_im, vmin, vmax, epoints);
    if (maxima->parsed()) return run_maxima(cfg, mregion, count, floor);
    if (verify->parsed()) return run_verify(cfg);
    if (mscan->parsed()) {
      if (orders.empty()) orders = {0, 4, 10, 18, 22};
      return run_measure_scan(cfg, orders, decades, samples);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  } catch (const PoleError& e) {
    std::cerr << "evaluation refused near a density pole (n=" << e.n << ", v2={re="
              << fmt_double(e.pole.real()) << ",im=" << fmt_double(e.pole.imag())
              << "}): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
