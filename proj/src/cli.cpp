#include "lensreeb/cli.hpp"

#include "lensreeb/ellipsoid_oracle.hpp"
#include "lensreeb/integrator.hpp"
#include "lensreeb/json_io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

namespace lensreeb::cli {

using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNonSuccess = 2;

/// Thrown for outcomes that map to a non-zero exit code.
struct Failure {
  int code;
  std::string type;
  std::string message;
  json detail = nullptr;
};

Failure usage(const std::string& message) { return {kUsage, "usage", message}; }

struct Common {
  std::string model = "henon-heiles";
  std::optional<std::string> energy;  // decimal or exact rational such as 1/6
  double tol = 1e-12;
  int depth = 16;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  double r1 = 1.0;
  double r2 = std::pow(2.0, 0.25);
  std::string config;
};

void add_common(CLI::App* sub, Common& c, bool with_model = true) {
  if (with_model) {
    sub->add_option("--model", c.model, "built-in model (henon-heiles, harmonic, decoupled-z4, ellipsoid) or JSON file")
        ->capture_default_str();
    sub->add_option("--r1", c.r1, "ellipsoid radius r1")->capture_default_str();
    sub->add_option("--r2", c.r2, "ellipsoid radius r2")->capture_default_str();
    sub->add_option("--energy", c.energy, "energy level (decimal or rational p/q)");
  }
  sub->add_option("--tol", c.tol, "integrator tolerance in [1e-14, 1e-4]")->capture_default_str();
  sub->add_option("--depth", c.depth, "maximal quadtree depth in [1, 24]")->capture_default_str();
  sub->add_option("--seed", c.seed, "seed for randomized scans")->capture_default_str();
  sub->add_option("--out", c.out, "output file (default: standard output)");
  sub->add_option("--format", c.format, "json or csv");
  sub->add_option("--config", c.config, "JSON configuration file (keys are long option names)");
}

HamiltonianModel load_model(const Common& c) {
  if (std::filesystem::exists(c.model) && std::filesystem::is_regular_file(c.model)) {
    std::ifstream in(c.model);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw usage("model file: " + std::string(e.what()));
    }
    return model_from_json(j);
  }
  if (c.model == "ellipsoid" && !(c.r1 > 0 && c.r2 > 0)) throw usage("ellipsoid radii must be positive");
  return builtin_model(c.model, c.r1, c.r2);
}

double require_energy(const Common& c) {
  if (!c.energy) throw usage("--energy is required");
  double e = 0;
  try {
    e = parse_coefficient(*c.energy).value();
  } catch (const std::invalid_argument&) {
    throw usage("--energy: cannot parse '" + *c.energy + "'");
  }
  if (!std::isfinite(e)) throw usage("--energy must be finite");
  return e;
}

void check_common(const Common& c) {
  if (!(c.tol >= 1e-14 && c.tol <= 1e-4)) throw usage("--tol must lie in [1e-14, 1e-4]");
  if (c.depth < 1 || c.depth > 24) throw usage("--depth must lie in [1, 24]");
}

std::string format_of(const Common& c, const std::string& fallback, std::initializer_list<const char*> allowed) {
  const std::string f = c.format.empty() ? fallback : c.format;
  for (const char* a : allowed) {
    if (f == a) return f;
  }
  throw usage("--format '" + f + "' is not supported by this command");
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw usage("cannot open output file '" + c.out + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string number(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage("cannot open '" + path + "'");
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw usage("'" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------- hill

struct HillArgs {
  Common c;
  int resolution = 512;
};

int cmd_hill(const HillArgs& a, std::ostream& out) {
  check_common(a.c);
  const HamiltonianModel model = load_model(a.c);
  if (!model.is_mechanical()) throw usage("hill: model must be mechanical");
  const std::string fmt = format_of(a.c, "csv", {"csv", "json"});
  const HillRegion region = hill_region(model.potential(), require_energy(a.c), a.resolution);
  if (fmt == "json") {
    json j = to_json(region);
    j["model"] = model.name();
    emit(a.c, dump(j), out);
  } else {
    std::ostringstream s;
    s << "loop,x1,x2\n";
    for (std::size_t l = 0; l < region.loops().size(); ++l) {
      for (const Point2& q : region.loops()[l]) s << l << ',' << number(q.x()) << ',' << number(q.y()) << '\n';
    }
    emit(a.c, s.str(), out);
  }
  return kOk;
}

// ---------------------------------------------------------------- convexity

struct ConvexityArgs {
  Common c;
  bool certify = false;
  int grid = 400;
};

int cmd_convexity(const ConvexityArgs& a, std::ostream& out) {
  check_common(a.c);
  const HamiltonianModel model = load_model(a.c);
  if (!model.is_mechanical()) throw usage("convexity: model must be mechanical");
  format_of(a.c, "json", {"json"});
  const double e = require_energy(a.c);
  if (a.certify) {
    const Certificate cert = certify_positive(model.potential(), e, a.c.depth);
    json j = to_json(cert);
    j["model"] = model.name();
    j["max_depth"] = a.c.depth;
    emit(a.c, dump(j), out);
    if (cert.status != CertificateStatus::ProvenPositive) {
      throw Failure{kNonSuccess, "certificate", "certificate status " + to_string(cert.status), j};
    }
    return kOk;
  }
  if (a.grid < 8) throw usage("--grid must be >= 8");
  const HillRegion region = hill_region(model.potential(), e);
  json j = to_json(scan_g_e(model.potential(), region, a.grid));
  j["model"] = model.name();
  j["energy"] = e;
  j["grid"] = a.grid;
  emit(a.c, dump(j), out);
  return kOk;
}

// ---------------------------------------------------------------- orbit / cz

struct OrbitArgs {
  Common c;
  std::string symmetry = "rotational";
  int p = 3;
  std::vector<double> seed_point;
  int samples = 256;
};

SymmetryKind symmetry_kind(const std::string& s) {
  if (s == "rotational") return SymmetryKind::Rotational;
  if (s == "reversible") return SymmetryKind::Reversible;
  if (s == "none") return SymmetryKind::None;
  throw usage("--symmetry must be rotational, reversible or none");
}

PeriodicOrbit locate_orbit(const OrbitArgs& a, const HamiltonianModel& model, double energy) {
  OrbitSearch s;
  s.kind = symmetry_kind(a.symmetry);
  s.p = a.p;
  s.tol = a.c.tol;
  if (!a.seed_point.empty()) {
    if (a.seed_point.size() != 4) throw usage("--seed-point takes four numbers x1 x2 y1 y2");
    s.seed = PhasePoint{a.seed_point[0], a.seed_point[1], a.seed_point[2], a.seed_point[3]};
  }
  if (s.kind == SymmetryKind::None && !s.seed) throw usage("--symmetry none needs --seed-point");
  return find_periodic_orbit(model, energy, s);
}

int cmd_orbit(const OrbitArgs& a, std::ostream& out) {
  check_common(a.c);
  const HamiltonianModel model = load_model(a.c);
  const std::string fmt = format_of(a.c, "json", {"json", "csv"});
  if (a.samples < 0) throw usage("--samples must be >= 0");
  const PeriodicOrbit orbit = locate_orbit(a, model, require_energy(a.c));
  if (fmt == "json") {
    json j = to_json(orbit, a.samples);
    j["seed"] = a.c.seed;
    emit(a.c, dump(j), out);
  } else {
    std::ostringstream s;
    s << "t,x1,x2\n";
    const int n = std::max(a.samples, 1);
    for (int i = 0; i <= n; ++i) {
      const double t = orbit.period * i / n;
      const PhasePoint x = orbit.at(t);
      s << number(t) << ',' << number(x.x1) << ',' << number(x.x2) << '\n';
    }
    emit(a.c, s.str(), out);
  }
  return kOk;
}

struct CzArgs {
  OrbitArgs o;
  std::string orbit = "P1";
  std::string frame = "global";
  std::string engine = "both";
  int iterate = 1;
  int modes = 512;
};

int cmd_cz(const CzArgs& a, std::ostream& out) {
  const Common& c = a.o.c;
  check_common(c);
  format_of(c, "json", {"json"});
  const HamiltonianModel model = load_model(c);
  if (a.iterate < 1) throw usage("--iterate must be >= 1");
  if (a.engine != "geometric" && a.engine != "spectral" && a.engine != "both") {
    throw usage("--engine must be geometric, spectral or both");
  }
  const bool is_ellipsoid = std::holds_alternative<Ellipsoid>(model.kind());

  PeriodicOrbit orbit = [&] {
    if (!is_ellipsoid) return locate_orbit(a.o, model, require_energy(c));
    if (c.energy && require_energy(c) != 1.0) throw usage("cz: ellipsoid orbits are computed on H = 1");
    const auto& el = std::get<Ellipsoid>(model.kind());
    if (a.orbit != "P1" && a.orbit != "P2") throw usage("--orbit must be P1 or P2");
    const PhasePoint seed = a.orbit == "P1" ? PhasePoint{el.r1, 0, 0, 0} : PhasePoint{0, el.r2, 0, 0};
    return refine_periodic_orbit(model, 1.0, seed, c.tol, 1024);
  }();

  std::unique_ptr<FrameProvider> frame;
  int divisor = 1;
  if (a.frame == "global") {
    frame = global_frame(model);
  } else if (a.frame == "disk" || a.frame == "equivariant") {
    if (!is_ellipsoid) throw usage("cz: disk and equivariant frames are available for the ellipsoid model only");
    const auto& el = std::get<Ellipsoid>(model.kind());
    if (a.frame == "disk") {
      frame = disk_frame(model, a.orbit == "P1" ? ellipsoid_disk_p1(el.r1, el.r2) : ellipsoid_disk_p2(el.r1, el.r2));
    } else {
      if (a.orbit != "P1") throw usage("cz: the equivariant frame lives along P1");
      if (a.o.p < 2) throw usage("cz: the equivariant frame needs --p >= 2");
      frame = section_frame(model, equivariant_section(a.o.p), "equivariant");
      divisor = a.o.p;
    }
  } else {
    throw usage("--frame must be global, disk or equivariant");
  }

  PathOptions po;
  po.tol = std::max(c.tol, 1e-13);
  po.samples_per_period = std::max(1024, a.modes) * divisor;
  const SymplecticPath path = variational_path(orbit, *frame, a.iterate, po);

  json j{{"model", model.name()},
         {"energy", orbit.energy},
         {"orbit", {{"period", orbit.period}, {"reeb_action", orbit.reeb_action}, {"initial_state", to_json(orbit.states.front())}}},
         {"frame", path.frame},
         {"iterate", a.iterate}};
  j["rotation_number"] = to_json(rotation_number(path));
  if (divisor > 1 && a.iterate == 1) j["rotation_number_quotient"] = to_json(rotation_number(quotient_path(path, divisor)));
  std::optional<int> index;
  bool degenerate = false;
  if (a.engine != "spectral") {
    const GeometricIndex g = geometric_index(path);
    j["geometric"] = to_json(g);
    index = g.index;
    degenerate = degenerate || g.degenerate;
  }
  if (a.engine != "geometric") {
    const SpectralIndex s = spectral_index(path, a.modes);
    j["spectral"] = to_json(s);
    if (index && *index != s.index) j["engines_agree"] = false;
    if (!index) index = s.index;
    degenerate = degenerate || s.degenerate;
  }
  if (a.engine == "both" && !j.contains("engines_agree")) j["engines_agree"] = true;
  j["index"] = *index;
  j["degenerate"] = degenerate;
  emit(c, dump(j), out);
  if (degenerate) throw Failure{kNonSuccess, "degenerate", "the path is degenerate; the index is not defined", nullptr};
  return kOk;
}

// ---------------------------------------------------------------- linking / sl

struct LinkArgs {
  Common c;
  std::string a_file, b_file;
  int samples = 1024;
};

int cmd_linking(const LinkArgs& a, std::ostream& out) {
  format_of(a.c, "json", {"json"});
  if (a.a_file.empty() != a.b_file.empty()) throw usage("linking: give both --a and --b, or neither");
  if (a.samples < 64) throw usage("--samples must be >= 64");
  ClosedCurve ca, cb;
  if (a.a_file.empty()) {
    ca = hopf_fibre({1, 0, 0, 0}, a.samples);
    cb = hopf_fibre({0, 1, 0, 0}, a.samples);
  } else {
    try {
      ca = curve_from_json(read_json_file(a.a_file));
      cb = curve_from_json(read_json_file(a.b_file));
    } catch (const LinkingError& e) {
      throw usage(e.what());
    }
  }
  json j = to_json(gauss_link(ca, cb));
  j["curves"] = a.a_file.empty() ? json("hopf-pair") : json({a.a_file, a.b_file});
  emit(a.c, dump(j), out);
  return kOk;
}

struct SlArgs {
  Common c;
  std::string curve_file, disk_file;
  double eps = 1e-3;
  int samples = 2048;
};

int cmd_sl(const SlArgs& a, std::ostream& out) {
  format_of(a.c, "json", {"json"});
  if (a.curve_file.empty() != a.disk_file.empty()) throw usage("sl: give both --curve and --disk, or neither");
  ClosedCurve k;
  std::optional<SpanningDisk> disk;
  if (a.curve_file.empty()) {
    if (a.samples < 64) throw usage("--samples must be >= 64");
    k = ClosedCurve::sample(
        [](double t) { return PhasePoint::from_z(std::polar(1.0, -2 * std::numbers::pi * t), 0.0); }, a.samples);
    disk.emplace([](Complex z) { return PhasePoint::from_z(z, std::sqrt(std::max(0.0, 1 - std::norm(z)))); }, "round");
  } else {
    k = curve_from_json(read_json_file(a.curve_file));
    disk.emplace(disk_from_json(read_json_file(a.disk_file)));
  }
  SelfLinkOptions o;
  o.eps = a.eps;
  const SelfLinkResult r = self_linking(k, *disk, o);
  json j{{"value", r.value}, {"eps", a.eps}, {"min_transversality", r.min_transversality}, {"link", to_json(r.link)}};
  j["curve"] = a.curve_file.empty() ? json("round-z1-circle") : json(a.curve_file);
  emit(a.c, dump(j), out);
  return kOk;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
  Common c;
  double r1 = 1.0;
  double r2 = std::pow(2.0, 0.25);
  int p = 3;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out, std::ostream& err) {
  format_of(a.c, "json", {"json"});
  const EllipsoidData d = ellipsoid_oracle(a.r1, a.r2, a.p);
  for (const std::string& w : d.warnings) err << json{{"warning", w}}.dump() << "\n";
  emit(a.c, dump(to_json(d)), out);
  return kOk;
}

/// Fills options not given on the command line from a flat JSON object whose
/// keys are long option names; unknown keys are rejected.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  const json j = read_json_file(path);
  if (!j.is_object()) throw usage("config: expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    CLI::Option* opt = it.key() == "config" ? nullptr : sub->get_option_no_throw("--" + it.key());
    if (!opt) throw usage("config: unknown key '" + it.key() + "' for '" + sub->get_name() + "'");
    if (opt->count() > 0) continue;  // the command line wins
    auto scalar = [&](const json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
      if (v.is_number()) return v.dump();
      throw usage("config: unsupported value for '" + it.key() + "'");
    };
    if (it->is_array()) {
      for (const auto& v : *it) opt->add_result(scalar(v));
    } else {
      opt->add_result(scalar(*it));
    }
    try {
      opt->run_callback();
    } catch (const CLI::ParseError& e) {
      throw usage("config: '" + it.key() + "': " + e.what());
    }
  }
}

void report(std::ostream& err, const Failure& f) {
  json j{{"error", {{"type", f.type}, {"message", f.message}, {"exit_code", f.code}}}};
  if (!f.detail.is_null()) j["error"]["detail"] = f.detail;
  err << j.dump() << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reeb dynamics on energy levels in R^4: Hill regions, convexity certificates, periodic orbits, "
               "Conley-Zehnder indices and linking numbers",
               "lensreeb"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  HillArgs hill;
  auto* s_hill = app.add_subcommand("hill", "boundary of the Hill region (CSV or JSON)");
  add_common(s_hill, hill.c);
  s_hill->add_option("--resolution", hill.resolution, "grid points per axis")->capture_default_str();

  ConvexityArgs conv;
  auto* s_conv = app.add_subcommand("convexity", "grid scan of G_E, or an interval certificate with --certify");
  add_common(s_conv, conv.c);
  s_conv->add_flag("--certify", conv.certify, "run the interval quadtree certificate");
  s_conv->add_option("--grid", conv.grid, "grid size of the scan")->capture_default_str();

  OrbitArgs orb;
  auto* s_orbit = app.add_subcommand("orbit", "periodic orbit by symmetric shooting");
  add_common(s_orbit, orb.c);
  s_orbit->add_option("--symmetry", orb.symmetry, "rotational, reversible or none")->capture_default_str();
  s_orbit->add_option("--p", orb.p, "order of the rotation symmetry")->capture_default_str();
  s_orbit->add_option("--seed-point", orb.seed_point, "initial guess x1 x2 y1 y2 (symmetry none)")->expected(4);
  s_orbit->add_option("--samples", orb.samples, "samples of the orbit in the output")->capture_default_str();

  CzArgs cz;
  auto* s_cz = app.add_subcommand("cz", "Conley-Zehnder index and rotation number of a periodic orbit");
  add_common(s_cz, cz.o.c);
  s_cz->add_option("--symmetry", cz.o.symmetry, "orbit search: rotational, reversible or none")->capture_default_str();
  s_cz->add_option("--p", cz.o.p, "symmetry order, or lens order for the equivariant frame")->capture_default_str();
  s_cz->add_option("--seed-point", cz.o.seed_point, "initial guess x1 x2 y1 y2")->expected(4);
  s_cz->add_option("--orbit", cz.orbit, "ellipsoid orbit P1 or P2")->capture_default_str();
  s_cz->add_option("--frame", cz.frame, "global, disk or equivariant")->capture_default_str();
  s_cz->add_option("--engine", cz.engine, "geometric, spectral or both")->capture_default_str();
  s_cz->add_option("--iterate", cz.iterate, "iterate of the orbit")->capture_default_str();
  s_cz->add_option("--modes", cz.modes, "Fourier modes of the spectral engine")->capture_default_str();

  LinkArgs lk;
  auto* s_link = app.add_subcommand("linking", "linking number of two closed curves on S^3");
  add_common(s_link, lk.c, false);
  s_link->add_option("--a", lk.a_file, "first curve (JSON array of points)");
  s_link->add_option("--b", lk.b_file, "second curve (JSON array of points)");
  s_link->add_option("--samples", lk.samples, "samples per fibre of the built-in Hopf pair")->capture_default_str();

  SlArgs sl;
  auto* s_sl = app.add_subcommand("sl", "self-linking number of a transverse unknot with a spanning disk");
  add_common(s_sl, sl.c, false);
  s_sl->add_option("--curve", sl.curve_file, "curve (JSON array of points)");
  s_sl->add_option("--disk", sl.disk_file, "disk samples (JSON)");
  s_sl->add_option("--eps", sl.eps, "pushoff distance in [1e-4, 1e-2]")->capture_default_str();
  s_sl->add_option("--samples", sl.samples, "samples of the built-in round circle")->capture_default_str();

  OracleArgs orc;
  auto* s_oracle = app.add_subcommand("oracle", "closed-form reference data");
  s_oracle->require_subcommand(1);
  auto* s_ell = s_oracle->add_subcommand("ellipsoid", "ellipsoid E(r1, r2) and its Z_p quotient");
  add_common(s_ell, orc.c, false);
  s_ell->add_option("--r1", orc.r1, "radius r1")->capture_default_str();
  s_ell->add_option("--r2", orc.r2, "radius r2")->capture_default_str();
  s_ell->add_option("--p", orc.p, "order of the deck group")->capture_default_str();

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      out << app.help();
      return kOk;
    } catch (const CLI::ParseError& e) {
      throw usage(e.what());
    }
    for (auto [sub, path] : {std::pair{s_hill, &hill.c.config}, {s_conv, &conv.c.config}, {s_orbit, &orb.c.config},
                             {s_cz, &cz.o.c.config}, {s_link, &lk.c.config}, {s_sl, &sl.c.config}, {s_ell, &orc.c.config}}) {
      if (sub->parsed()) apply_config(sub, *path);
    }
    try {
      if (s_hill->parsed()) return cmd_hill(hill, out);
      if (s_conv->parsed()) return cmd_convexity(conv, out);
      if (s_orbit->parsed()) return cmd_orbit(orb, out);
      if (s_cz->parsed()) return cmd_cz(cz, out);
      if (s_link->parsed()) return cmd_linking(lk, out);
      if (s_sl->parsed()) return cmd_sl(sl, out);
      if (s_ell->parsed()) return cmd_oracle(orc, out, err);
    } catch (const OrbitNoConvergence& e) {
      throw Failure{kNonSuccess, "orbit-no-convergence", e.what(), e.trace};
    } catch (const OrbitNotFound& e) {
      throw Failure{kNonSuccess, "orbit-not-found", e.what()};
    } catch (const IndexError& e) {
      throw Failure{kNonSuccess, "index", e.what()};
    } catch (const UnboundedRegionError& e) {
      throw Failure{kUsage, "unbounded-region", e.what()};
    } catch (const LinkingError& e) {
      throw Failure{kUsage, "linking", e.what()};
    } catch (const std::invalid_argument& e) {
      throw usage(e.what());
    } catch (const json::exception& e) {
      throw usage(e.what());
    }
    throw usage("no subcommand");
  } catch (const Failure& f) {
    report(err, f);
    return f.code;
  } catch (const std::exception& e) {
    report(err, {kUsage, "runtime", e.what()});
    return kUsage;
  }
}

}  // namespace lensreeb::cli
