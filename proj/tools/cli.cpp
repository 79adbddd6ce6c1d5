#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "anelor/dynamics.hpp"
#include "anelor/errors.hpp"
#include "anelor/io.hpp"
#include "anelor/lorenz_reduction.hpp"
#include "anelor/projection.hpp"
#include "anelor/spectral_validation.hpp"

namespace anelor::cli {
namespace {

using nlohmann::ordered_json;

constexpr double kCoeffTolerance = 1e-6;
constexpr double kRouteTolerance = 1e-8;

struct Range {
  std::optional<double> start;
  std::optional<double> stop;
  std::optional<int> count;

  bool any() const { return start || stop || count; }
};

struct RunConfig {
  std::string subcommand;
  PhysicalParams params;
  std::optional<double> reduced_r;
  Range beta_sweep;
  Range l_sweep;
  bool optimize_l = false;
  double l_min = 0.5;
  double l_max = 10.0;
  std::vector<int> truncations{1, 2, 4, 8};
  int horizontal = 1;
  int order = 64;
  double rtol = 1e-10;
  double atol = 1e-12;
  double t_end = 20.0;
  std::optional<double> s_end;
  std::size_t samples = 1001;
  ReducedState initial{1e-3, 1e-3, 1e-3};
  std::string coords = "abc";
  std::string source = "oracle";
  std::string format = "csv";
  std::string output;
  std::string report;
  bool quiet = false;
  unsigned threads = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- config file

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::string json_scalar(const ordered_json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  throw CLI::ConfigError("config key '" + key + "': value must be a number, string or boolean");
}

// Flat key=value lines or a flat JSON object.
class FlatConfig : public CLI::Config {
 public:
  explicit FlatConfig(std::set<std::string> known) : known_(std::move(known)) {}

  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    std::ostringstream os;
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames().front();
      std::vector<std::string> values = opt->reduced_results();
      if (values.empty() && default_also && !opt->get_default_str().empty()) {
        values = {opt->get_default_str()};
      }
      if (values.empty()) continue;
      os << name << " = " << CLI::detail::join(values, ",") << '\n';
    }
    return os.str();
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::string text((std::istreambuf_iterator<char>(input)), std::istreambuf_iterator<char>());
    const std::string body = trim(text);
    if (!body.empty() && body.front() == '{') return from_json(body);
    return from_lines(text);
  }

 private:
  void check_key(const std::string& key, const std::string& where) const {
    if (key.empty()) throw CLI::ConfigError(where + ": empty key");
    if (!known_.count(key)) throw CLI::ConfigError(where + ": unknown key '" + key + "'");
  }

  std::vector<CLI::ConfigItem> from_json(const std::string& body) const {
    ordered_json doc;
    try {
      doc = ordered_json::parse(body);
    } catch (const ordered_json::parse_error& e) {
      throw CLI::ConfigError("config JSON: parse error at byte " + std::to_string(e.byte));
    }
    if (!doc.is_object()) throw CLI::ConfigError("config JSON: top level must be an object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      check_key(key, "config JSON");
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(json_scalar(v, key));
      } else {
        item.inputs.push_back(json_scalar(value, key));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

  std::vector<CLI::ConfigItem> from_lines(const std::string& text) const {
    std::vector<CLI::ConfigItem> items;
    std::istringstream lines(text);
    std::string raw;
    int number = 0;
    while (std::getline(lines, raw)) {
      ++number;
      const std::string where = "config line " + std::to_string(number);
      std::string line = raw;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw CLI::ConfigError(where + ": expected key=value, got '" + line + "'");
      }
      CLI::ConfigItem item;
      item.name = trim(std::string_view(line).substr(0, eq));
      check_key(item.name, where);
      const std::string value = unquote(trim(std::string_view(line).substr(eq + 1)));
      if (value.empty()) throw CLI::ConfigError(where + ": missing value for '" + item.name + "'");
      std::stringstream parts(value);
      std::string part;
      while (std::getline(parts, part, ',')) item.inputs.push_back(trim(part));
      items.push_back(std::move(item));
    }
    return items;
  }

  std::set<std::string> known_;
};

// ---------------------------------------------------------------- helpers

std::string env_name(const std::string& flag) {
  std::string out = "ANELOR_";
  for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::vector<double> expand(const Range& r, double single, const char* name) {
  if (!r.any()) return {single};
  if (!r.start || !r.stop || !r.count) {
    throw UsageError(std::string(name) + " sweep needs start, stop and count");
  }
  if (*r.count < 1) throw UsageError(std::string(name) + "-count must be >= 1");
  if (*r.count == 1) {
    if (*r.stop < *r.start) throw UsageError(std::string(name) + " sweep must be increasing");
    return {*r.start};
  }
  if (!(*r.stop > *r.start)) throw UsageError(std::string(name) + " sweep must be increasing");
  std::vector<double> v(*r.count);
  for (int i = 0; i < *r.count; ++i) {
    v[i] = i + 1 == *r.count ? *r.stop : *r.start + (*r.stop - *r.start) * i / (*r.count - 1);
  }
  return v;
}

// Runs f(0..n-1) on a small pool; results and the first error follow index order.
template <class F>
auto parallel_map(std::size_t n, unsigned threads, F f) {
  using R = decltype(f(std::size_t{0}));
  std::vector<R> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

CoeffSource source_of(const RunConfig& cfg) { return *parse_coeff_source(cfg.source); }

struct Emitter {
  const RunConfig& cfg;
  std::ostream& out;
  std::ostream& err;

  void data(const std::string& text, const std::string& path) const {
    if (path.empty()) {
      out << text;
      return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
    f << text;
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
  }
  void note(const std::string& text) const {
    if (!cfg.quiet) err << text << '\n';
  }
};

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- coeffs

struct CoeffPoint {
  PhysicalParams params;
  std::vector<ProjectionTermReport> report;
};

std::vector<CoeffPoint> coefficient_points(const RunConfig& cfg, const std::vector<double>& betas) {
  const auto lengths = expand(cfg.l_sweep, cfg.params.length, "l");
  std::vector<PhysicalParams> points;
  for (double b : betas) {
    for (double l : lengths) {
      PhysicalParams p = cfg.params.with_beta(b).with_length(l);
      p.validate();
      points.push_back(p);
    }
  }
  const QuadratureRule rule(cfg.order);
  return parallel_map(points.size(), cfg.threads, [&](std::size_t i) {
    return CoeffPoint{points[i], discrepancy_report(points[i], rule)};
  });
}

std::string render_report(const std::vector<CoeffPoint>& pts, const std::string& format) {
  if (format == "json") {
    ordered_json j;
    j["provenance"] = {{"oracle", "tensor Gauss-Legendre quadrature of the projections"},
                       {"closed_form", "analytic evaluation of the projection integrals"},
                       {"paper", "literal transcription of the displayed reference coefficients"}};
    ordered_json arr = ordered_json::array();
    for (const auto& pt : pts) arr.push_back(ordered_json::parse(discrepancy_report_json(pt.report, pt.params)));
    j["points"] = std::move(arr);
    return dump(j);
  }
  std::string s = "beta,l,term,oracle,closed_form,paper,rel_dev,paper_rel_dev\n";
  for (const auto& pt : pts) {
    for (const auto& r : pt.report) {
      const std::string row[] = {format_number(pt.params.beta),
                                 format_number(pt.params.length),
                                 r.term,
                                 format_number(r.oracle),
                                 format_number(r.closed_form),
                                 r.paper ? format_number(*r.paper) : "",
                                 format_number(r.rel_dev),
                                 r.paper_rel_dev ? format_number(*r.paper_rel_dev) : ""};
      s += csv_line(row);
    }
  }
  return s;
}

int cmd_coeffs(const RunConfig& cfg, const Emitter& em) {
  const auto pts = coefficient_points(cfg, expand(cfg.beta_sweep, cfg.params.beta, "beta"));
  em.data(render_report(pts, cfg.format), cfg.output);
  double worst = 0.0;
  for (const auto& pt : pts) {
    for (const auto& r : pt.report) worst = std::max(worst, r.rel_dev);
  }
  em.note("max oracle/closed-form relative deviation: " + format_number(worst));
  if (!(worst <= kCoeffTolerance)) {
    em.err << "error: oracle and closed form disagree beyond " << format_number(kCoeffTolerance) << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- critical

struct CriticalRow {
  double beta = 0.0;
  double length = 0.0;
  double rayleigh = 0.0;
  double ratio = 0.0;
  double taylor = 0.0;
};

int cmd_critical(const RunConfig& cfg, const Emitter& em) {
  const auto betas = expand(cfg.beta_sweep, cfg.params.beta, "beta");
  const CoeffSource source = source_of(cfg);
  const QuadratureRule rule(cfg.order);
  const PhysicalParams& base = cfg.params;
  base.validate();

  struct Job {
    double beta;
    double length;  // ignored with --optimize-l
  };
  std::vector<Job> jobs;
  std::vector<double> lengths;
  if (cfg.optimize_l) {
    if (cfg.l_sweep.any()) throw UsageError("--optimize-l cannot be combined with an l sweep");
    lengths = {base.length};
  } else {
    lengths = expand(cfg.l_sweep, base.length, "l");
  }
  // Reference β = 0 jobs first, then the requested points.
  for (double l : lengths) jobs.push_back({0.0, l});
  for (double b : betas) {
    for (double l : lengths) jobs.push_back({b, l});
  }
  LengthSearch search;
  search.lower = cfg.l_min;
  search.upper = cfg.l_max;
  search.source = source;

  const auto solved = parallel_map(jobs.size(), cfg.threads, [&](std::size_t i) {
    PhysicalParams p = base.with_beta(jobs[i].beta).with_length(jobs[i].length);
    p.validate();
    if (cfg.optimize_l) {
      const LengthOptimum opt = minimize_over_length(p.beta, p.prandtl, p.gamma, search, rule);
      return std::pair{opt.length, opt.rayleigh};
    }
    return std::pair{p.length, critical_rayleigh(p, source, rule)};
  });

  std::vector<CriticalRow> rows;
  std::size_t k = lengths.size();
  for (double b : betas) {
    for (std::size_t li = 0; li < lengths.size(); ++li, ++k) {
      const double ra0 = solved[li].second;
      CriticalRow r{b, solved[k].first, solved[k].second, solved[k].second / ra0, 0.0};
      r.taylor = b > 0.0 ? (r.ratio - 1.0) / b : std::numeric_limits<double>::quiet_NaN();
      rows.push_back(r);
    }
  }

  std::string text;
  if (cfg.format == "json") {
    ordered_json j;
    j["source"] = std::string(to_string(source));
    j["optimize_l"] = cfg.optimize_l;
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      arr.push_back({{"beta", r.beta},
                     {"l", r.length},
                     {"Ra_critical", r.rayleigh},
                     {"ratio", r.ratio},
                     {"taylor_ratio", std::isnan(r.taylor) ? ordered_json(nullptr) : ordered_json(r.taylor)}});
    }
    j["rows"] = std::move(arr);
    text = dump(j);
  } else {
    text = "beta,l,Ra_critical,ratio,taylor_ratio\n";
    for (const auto& r : rows) {
      const std::string row[] = {format_number(r.beta), format_number(r.length), format_number(r.rayleigh),
                                 format_number(r.ratio), format_number(r.taylor)};
      text += csv_line(row);
    }
  }
  em.data(text, cfg.output);
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const RunConfig& cfg, const Emitter& em) {
  if (cfg.beta_sweep.any() || cfg.l_sweep.any()) throw UsageError("simulate takes a single parameter point");
  const CoeffSource source = source_of(cfg);
  const QuadratureRule rule(cfg.order);
  PhysicalParams p = cfg.params;
  if (cfg.reduced_r) {
    if (!(*cfg.reduced_r >= 0.0)) throw UsageError("--r must be >= 0");
    p.validate();
    p.rayleigh = *cfg.reduced_r * critical_rayleigh(p, source, rule);
  }
  p.validate();
  const GalerkinCoeffs coeffs = galerkin_coefficients(p, source, rule);

  if (cfg.coords == "abc") {
    if (cfg.s_end) throw UsageError("--s-end applies to xyz or both coordinates");
    const Trajectory traj = integrate_reduced(coeffs, cfg.initial, cfg.t_end, cfg.rtol, cfg.atol, cfg.samples);
    em.data(cfg.format == "json" ? trajectory_json(traj) : trajectory_csv(traj), cfg.output);
    em.note(std::string("trend: ") + to_string(classify_trend(traj)));
    return kExitOk;
  }

  const LorenzReduction red = scale_to_lorenz(coeffs);
  const double d = red.scaling.d;
  const double s_end = cfg.s_end ? *cfg.s_end : d * cfg.t_end;
  const std::vector<double> s_times = uniform_times(s_end, cfg.samples);
  const Vec3 x0 = red.scaling.to_lorenz(cfg.initial.vec());
  const Trajectory direct = integrate_lorenz(red.lorenz, x0, s_times, cfg.rtol, cfg.atol);

  if (cfg.coords == "xyz") {
    em.data(cfg.format == "json" ? trajectory_json(direct) : trajectory_csv(direct), cfg.output);
    em.note("sigma=" + format_number(red.lorenz.sigma) + " r=" + format_number(red.lorenz.r) +
            " delta=" + format_number(red.lorenz.delta));
    em.note(std::string("trend: ") + to_string(classify_trend(direct)));
    return kExitOk;
  }

  std::vector<double> t_times(s_times.size());
  for (std::size_t i = 0; i < s_times.size(); ++i) t_times[i] = s_times[i] / d;
  t_times.front() = 0.0;
  const Trajectory reduced = integrate_reduced(coeffs, cfg.initial, t_times, cfg.rtol, cfg.atol);
  const Trajectory mapped = map_trajectory(reduced, red.scaling);
  const double deviation = max_state_deviation(mapped, direct);

  std::string text;
  if (cfg.format == "json") {
    ordered_json j;
    j["lorenz"] = {{"sigma", red.lorenz.sigma}, {"r", red.lorenz.r}, {"delta", red.lorenz.delta}};
    j["scaling"] = {{"a", red.scaling.a}, {"b", red.scaling.b}, {"c", red.scaling.c}, {"d", red.scaling.d}};
    j["max_deviation"] = deviation;
    j["abc"] = ordered_json::parse(trajectory_json(reduced));
    j["xyz"] = ordered_json::parse(trajectory_json(direct));
    text = dump(j);
  } else {
    text = "t,A,B,C,s,X,Y,Z\n";
    for (std::size_t i = 0; i < reduced.size(); ++i) {
      const auto& a = reduced.states[i];
      const auto& x = direct.states[i];
      const std::string row[] = {format_number(reduced.times[i]), format_number(a[0]), format_number(a[1]),
                                 format_number(a[2]), format_number(direct.times[i]), format_number(x[0]),
                                 format_number(x[1]), format_number(x[2])};
      text += csv_line(row);
    }
  }
  em.data(text, cfg.output);
  em.note("max deviation between mapped ABC and direct XYZ: " + format_number(deviation));
  return kExitOk;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const RunConfig& cfg, const Emitter& em) {
  const auto betas = expand(cfg.beta_sweep, cfg.params.beta, "beta");
  if (cfg.truncations.empty()) throw UsageError("--N needs at least one truncation");
  for (int n : cfg.truncations) {
    if (n < 1) throw UsageError("--N values must be >= 1");
  }
  if (cfg.horizontal < 1) throw UsageError("--m must be >= 1");
  if (cfg.l_sweep.any()) throw UsageError("validate takes a single l");
  const QuadratureRule rule(cfg.order);

  struct Job {
    double beta;
    int truncation;  // 0 marks the reduction route
  };
  std::vector<Job> jobs;
  for (double b : betas) {
    for (int n : cfg.truncations) jobs.push_back({b, n});
    if (cfg.horizontal == 1) {
      jobs.push_back({b, 0});
      jobs.push_back({b, -1});  // N = 1 spectral reference for the route check
    }
  }
  const auto values = parallel_map(jobs.size(), cfg.threads, [&](std::size_t i) {
    PhysicalParams p = cfg.params.with_beta(jobs[i].beta);
    p.validate();
    if (jobs[i].truncation == 0) return critical_rayleigh(p, CoeffSource::oracle, rule);
    const int n = jobs[i].truncation < 0 ? 1 : jobs[i].truncation;
    return critical_rayleigh_spectral(p, jobs[i].truncation < 0 ? 1 : cfg.horizontal, n, rule);
  });

  std::vector<ConvergenceRow> rows;
  ordered_json routes = ordered_json::array();
  bool ok = true;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (jobs[i].truncation > 0) {
      rows.push_back({jobs[i].beta, cfg.horizontal, jobs[i].truncation, values[i]});
    } else if (jobs[i].truncation == 0) {
      const double raa = values[i];
      const double spectral = values[i + 1];
      const double dev = relative_deviation(spectral, raa);
      const bool pass = dev <= kRouteTolerance;
      ok = ok && pass;
      routes.push_back({{"beta", jobs[i].beta},
                        {"Ra_reduction", raa},
                        {"Ra_spectral_N1", spectral},
                        {"rel_dev", dev},
                        {"pass", pass}});
      em.note("beta=" + format_number(jobs[i].beta) + " route deviation " + format_number(dev) +
              (pass ? " ok" : " FAILED"));
    }
  }
  if (cfg.horizontal != 1) em.note("route check skipped: the reduction route is defined for m = 1");

  std::string text;
  if (cfg.format == "json") {
    ordered_json j;
    ordered_json conv = ordered_json::array();
    for (const auto& r : rows) {
      conv.push_back({{"beta", r.beta}, {"m", r.horizontal}, {"N", r.truncation}, {"Ra_critical", r.ra_critical}});
    }
    j["convergence"] = std::move(conv);
    j["route_consistency"] = std::move(routes);
    j["tolerance"] = kRouteTolerance;
    text = dump(j);
  } else {
    text = convergence_csv(rows);
  }
  em.data(text, cfg.output);

  if (!cfg.report.empty()) {
    RunConfig single = cfg;
    single.l_sweep = {};
    em.data(render_report(coefficient_points(single, betas), cfg.format), cfg.report);
  }
  if (!ok) {
    em.err << "error: spectral N=1 and reduction routes disagree beyond " << format_number(kRouteTolerance)
           << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- wiring

void add_range(CLI::App& app, const std::string& stem, Range& r, std::vector<CLI::Option*>& opts) {
  opts.push_back(app.add_option("--" + stem + "-start", r.start, "First " + stem + " of a sweep"));
  opts.push_back(app.add_option("--" + stem + "-stop", r.stop, "Last " + stem + " of a sweep"));
  opts.push_back(app.add_option("--" + stem + "-count", r.count, "Number of " + stem + " sweep points"));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Reduced anelastic convection: coefficients, onset, dynamics, validation", "anelor"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.option_defaults()->always_capture_default();

  std::vector<CLI::Option*> opts;
  opts.push_back(app.add_option("--beta", cfg.params.beta, "Compressibility factor beta >= 0"));
  opts.push_back(app.add_option("--pr", cfg.params.prandtl, "Prandtl number"));
  opts.push_back(app.add_option("--ra", cfg.params.rayleigh, "Rayleigh number"));
  opts.push_back(app.add_option("--r", cfg.reduced_r, "Set Ra to r times the critical value (simulate)"));
  opts.push_back(app.add_option("--gamma", cfg.params.gamma, "Viscosity ratio gamma >= 1/3"));
  opts.push_back(app.add_option("--l", cfg.params.length, "Horizontal period"));
  add_range(app, "beta", cfg.beta_sweep, opts);
  add_range(app, "l", cfg.l_sweep, opts);
  opts.push_back(app.add_flag("--optimize-l", cfg.optimize_l, "Minimize the critical Rayleigh number over l"));
  opts.push_back(app.add_option("--l-min", cfg.l_min, "Lower end of the l search bracket"));
  opts.push_back(app.add_option("--l-max", cfg.l_max, "Upper end of the l search bracket"));
  opts.push_back(app.add_option("--N", cfg.truncations, "Vertical truncations for validate")->delimiter(','));
  opts.push_back(app.add_option("--m", cfg.horizontal, "Horizontal wavenumber index for validate"));
  opts.push_back(app.add_option("--order", cfg.order, "Gauss-Legendre order per direction")
                     ->check(CLI::Range(32, 4096)));
  opts.push_back(app.add_option("--rtol", cfg.rtol, "Integrator relative tolerance"));
  opts.push_back(app.add_option("--atol", cfg.atol, "Integrator absolute tolerance"));
  opts.push_back(app.add_option("--t-end", cfg.t_end, "Final time in ABC units"));
  opts.push_back(app.add_option("--s-end", cfg.s_end, "Final time in Lorenz units (xyz, both)"));
  opts.push_back(app.add_option("--samples", cfg.samples, "Number of output samples")->check(CLI::Range(2, 100000000)));
  opts.push_back(app.add_option("--a0", cfg.initial.A, "Initial A"));
  opts.push_back(app.add_option("--b0", cfg.initial.B, "Initial B"));
  opts.push_back(app.add_option("--c0", cfg.initial.C, "Initial C"));
  opts.push_back(app.add_option("--coords", cfg.coords, "Trajectory coordinates")
                     ->check(CLI::IsMember({"abc", "xyz", "both"})));
  opts.push_back(app.add_option("--source", cfg.source, "Coefficient source: oracle, closed_form, paper_display")
                     ->check([](const std::string& s) {
                       return parse_coeff_source(s) ? std::string() : "unknown coefficient source '" + s + "'";
                     }));
  opts.push_back(app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"})));
  opts.push_back(app.add_option("--output", cfg.output, "Write data to this file instead of stdout"));
  opts.push_back(app.add_option("--report", cfg.report, "validate: write the discrepancy report here"));
  opts.push_back(app.add_flag("--quiet", cfg.quiet, "Suppress diagnostics on stderr"));
  opts.push_back(app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)"));

  std::set<std::string> known;
  for (CLI::Option* o : opts) {
    const std::string name = o->get_lnames().front();
    known.insert(name);
    o->envname(env_name(name));
  }
  app.config_formatter(std::make_shared<FlatConfig>(known));
  app.set_config("--config", "", "Read options from a key=value or JSON file")->envname("ANELOR_CONFIG");

  app.add_subcommand("coeffs", "Galerkin coefficients from quadrature and closed form");
  app.add_subcommand("critical", "Critical Rayleigh numbers over beta and l");
  app.add_subcommand("simulate", "Integrate the reduced and Lorenz systems");
  app.add_subcommand("validate", "Spectral truncation study and route consistency");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  const Emitter em{cfg, out, err};
  try {
    if (cfg.subcommand == "coeffs") return cmd_coeffs(cfg, em);
    if (cfg.subcommand == "critical") return cmd_critical(cfg, em);
    if (cfg.subcommand == "simulate") return cmd_simulate(cfg, em);
    return cmd_validate(cfg, em);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace anelor::cli
