#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qclab::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

json to_json(complex z) { return json::array({z.real(), z.imag()}); }
json to_json(Window w) { return json::array({w.lo, w.hi}); }

json atoms_json(const PointMeasure& mu) {
  json out = json::array();
  for (const auto& at : mu.atoms()) {
    if (at.gamma > 0.0) out.push_back({{"gamma", at.gamma}, {"b", to_json(at.b)}});
  }
  return out;
}

template <class F>
auto stage(const std::string& name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw StageError(name, e.kind(), e.what());
  }
}

ZeroSet restrict(const ZeroSet& a, Window w) {
  std::vector<Zero> kept;
  for (const auto& z : a.points()) {
    if (w.contains(z.point)) kept.push_back(z);
  }
  return ZeroSet(w, std::move(kept));
}

double reach(const ZeroSet& a) { return std::min(-a.window().lo, a.window().hi); }

std::vector<double> geometric_grid(double lo, double hi) {
  std::vector<double> out;
  for (double x = lo; x <= hi * (1.0 + 1e-12); x *= 2.0) out.push_back(x);
  if (out.empty() || out.back() < hi * (1.0 - 1e-12)) out.push_back(hi);
  return out;
}

json config_json(const RunConfig& cfg) {
  json c;
  c["command"] = to_string(cfg.command);
  c["window"] = cfg.window ? to_json(*cfg.window) : json(nullptr);
  c["height"] = cfg.height ? json(*cfg.height) : json(nullptr);
  c["cutoff"] = cfg.cutoff;
  c["grid_step"] = cfg.grid_step ? json(*cfg.grid_step) : json(nullptr);
  c["T"] = cfg.bohr_t ? json(*cfg.bohr_t) : json(nullptr);
  c["epsilon"] = cfg.epsilon;
  c["seed"] = cfg.seed;
  c["bohr_threshold"] = cfg.bohr_threshold;
  c["sigma"] = cfg.sigma;
  c["tail_tol"] = cfg.tail_tol;
  c["t3_budget"] = cfg.t3_budget;
  c["zeros"] = {{"resid_tol", cfg.zeros.resid_tol},
                {"boundary_tol", cfg.zeros.boundary_tol},
                {"edge_margin", cfg.zeros.edge_margin},
                {"newton_iterations", cfg.zeros.newton_iterations},
                {"newton_tol", cfg.zeros.newton_tol},
                {"refine_depth", cfg.zeros.refine_depth}};
  c["algebra"] = {{"freq_tol", cfg.algebra.freq_tol},
                  {"prune_tol", cfg.algebra.prune_tol},
                  {"max_terms", cfg.algebra.max_terms}};
  return c;
}

// State shared between the stages of one run.
struct Run {
  const RunConfig& cfg;
  Report report;
  std::optional<ExpSum> f;
  std::optional<ZeroSet> a;
  std::optional<double> density_d;
  std::optional<LogDerivMeasure> logderiv;
  std::optional<PointMeasure> bohr;

  ZeroOptions zero_opts() const {
    ZeroOptions z = cfg.zeros;
    z.algebra = cfg.algebra;
    return z;
  }

  double spectrum_width() const { return f->max_frequency() - f->min_frequency(); }

  void zeros_stage() {
    json& j = report.json["zeros"];
    const double d = spectrum_width();
    const Window requested = cfg.window.value_or(Window{-1000.0 / d, 1000.0 / d});
    const Window w = cfg.window ? requested : safe_window(*f, requested);
    const ZeroSearch s = stage("zeros/find_real_zeros", [&] { return search_real_zeros(*f, w, zero_opts()); });
    a = s.zeros;
    report.zeros = s.zeros;
    j["window"] = to_json(w);
    j["count"] = s.zeros.total_multiplicity();
    j["distinct"] = s.zeros.distinct();
    j["single_exponential"] = s.single_exponential;
    j["scan_step"] = s.scan_step;
    j["strip_count"] = s.strip_count;
    j["complete"] = s.strip_count == s.zeros.total_multiplicity();
    j["max_residual"] = s.max_residual;
    if (!s.single_exponential) {
      const double h = zero_strip_height(*f);
      const long total = stage("zeros/realness", [&] {
        return count_zeros_rectangle(*f, {w.lo, w.hi, -h, h}, zero_opts());
      });
      j["realness"] = {{"strip_height", h},
                       {"real_count", s.zeros.total_multiplicity()},
                       {"total_count", total},
                       {"all_real", total == s.zeros.total_multiplicity()}};
    }
    long max_mult = 0;
    for (const auto& z : s.zeros.points()) max_mult = std::max<long>(max_mult, z.multiplicity);
    j["max_multiplicity"] = max_mult;
  }

  void apset_stage() {
    json& j = report.json["apset"];
    if (a->empty()) {
      j["absent"] = "no zeros in the window";
      return;
    }
    CountingOptions copts;
    copts.seed = cfg.seed;
    const CountingConstants k = stage("apset/counting_constants", [&] { return counting_constants(*a, copts); });
    j["counting"] = {{"k1", k.k1}, {"k1_half_open", k.k1_half_open}, {"k2", k.k2}, {"windows_sampled", k.windows_sampled}, {"seed", cfg.seed}};
    const DensityEstimate dn = stage("apset/density", [&] { return density(*a, k); });
    density_d = dn.d;
    j["density"] = {{"d", dn.d}, {"error_bound", dn.error_bound}, {"window_length", dn.window_length},
                    {"count", dn.count}};

    const PhiRepresentation phi = stage("apset/phi", [&] { return phi_representation(*a, dn.d); });
    j["phi"] = {{"first_index", phi.first_index()}, {"last_index", phi.last_index()},
                {"sup_abs", phi.sup_abs()}};

    const double tau_hi = std::min(50.0, 0.25 * a->window().length());
    const AlmostPeriodReport ap =
        stage("apset/almost_periods", [&] { return almost_periods(*a, cfg.epsilon, {0.0, tau_hi}, dn.d); });
    json periods = json::array();
    for (const auto& p : ap.periods) {
      periods.push_back({{"tau", p.tau}, {"shift", p.shift}, {"sup_dev", p.sup_dev}});
    }
    j["almost_periods"] = {{"epsilon", ap.epsilon}, {"range", to_json(ap.search_range)},
                           {"edge_band", ap.edge_band}, {"shifts_scanned", ap.shifts_scanned},
                           {"max_gap", ap.max_gap}, {"periods", periods}};

    const Translation tr = translate_off_origin(*a);
    const double r_max = reach(tr.set);
    if (r_max > 10.0) {
      const LindelofReport lr = stage("apset/lindelof", [&] { return lindelof_sum(tr.set, geometric_grid(10.0, r_max)); });
      json sums = json::array();
      for (std::size_t i = 0; i < lr.radii.size(); ++i) sums.push_back(json::array({lr.radii[i], lr.sums[i]}));
      j["lindelof"] = {{"translation", tr.delta}, {"sums", sums}, {"cauchy_stat", lr.cauchy_stat}};
    }

    std::vector<long> taus;
    for (const auto& p : ap.periods) {
      if (taus.size() < 5) taus.push_back(p.shift);
    }
    if (!taus.empty()) {
      const long tmax = *std::max_element(taus.begin(), taus.end());
      const long n = std::min(-phi.first_index(), phi.last_index() - tmax);
      if (n >= 1) {
        const KreinLevinReport kl = stage("apset/krein_levin", [&] { return krein_levin_diagnostic(phi, taus, n); });
        j["krein_levin"] = {{"n", kl.n}, {"taus", kl.taus}, {"sums", kl.sums}, {"sup_abs", kl.sup_abs}, {"sup", kl.sup}};
      }
    }
  }

  void logderiv_stage() {
    json& j = report.json["diffraction"]["logderiv"];
    if (!f) {
      j = {{"present", false}, {"reason", "no exponential sum in the input"}};
      return;
    }
    LogDerivOptions lo;
    lo.height = cfg.height;
    lo.cutoff = cfg.cutoff;
    lo.zeros = zero_opts();
    lo.algebra = cfg.algebra;
    logderiv = stage("diffraction/logderiv", [&] { return logderiv_measure(*f, lo); });
    const PointMeasure& mu = logderiv->measure;
    j = {{"present", true},
         {"height", logderiv->height},
         {"h_norm", logderiv->h_norm},
         {"norm_at_height", logderiv->norm_at_height},
         {"c_f_bound", logderiv->c_f_bound},
         {"within_bound", logderiv->norm_at_height <= logderiv->c_f_bound},
         {"series_terms", logderiv->terms},
         {"cutoff", mu.cutoff()},
         {"realness_window", to_json(logderiv->realness_window)},
         {"d", mu.d()},
         {"conjugate_symmetry_error", mu.conjugate_symmetry_error()},
         {"atoms", atoms_json(mu)}};
  }

  void bohr_stage() {
    json& j = report.json["diffraction"]["bohr"];
    if (!a || a->empty()) {
      j = {{"present", false}, {"reason", "no zeros"}};
      return;
    }
    const double t = cfg.bohr_t.value_or(std::floor(0.95 * reach(*a)));
    if (cfg.grid_step) {
      const double h = *cfg.grid_step;
      if (!(h > 0.0)) throw StageError("diffraction/bohr", ErrorKind::invalid_input, "grid step must be positive");
      std::vector<double> grid;
      const long n = static_cast<long>(std::floor(cfg.cutoff / h + 1e-9));
      for (long k = -n; k <= n; ++k) grid.push_back(h * static_cast<double>(k));
      bohr = stage("diffraction/bohr", [&] { return bohr_scan(*a, grid, t, cfg.bohr_threshold); });
      j["method"] = "grid";
      j["grid_step"] = h;
    } else {
      bohr = stage("diffraction/bohr", [&] { return bohr_search(*a, cfg.cutoff, t, cfg.bohr_threshold); });
      j["method"] = "search";
    }
    j["present"] = true;
    j["T"] = t;
    j["threshold"] = cfg.bohr_threshold;
    j["error_heuristic"] = bohr_coefficient(*a, 0.0, t).error;
    j["d"] = bohr->d();
    j["conjugate_symmetry_error"] = bohr->conjugate_symmetry_error();
    j["atoms"] = atoms_json(*bohr);
  }

  void agreement() {
    json& j = report.json["diffraction"];
    if (logderiv && bohr) {
      double worst = 0.0;
      long compared = 0;
      long unmatched = 0;
      const double tol = 2.0 / cfg.bohr_t.value_or(std::floor(0.95 * reach(*a)));
      for (const auto& at : logderiv->measure.atoms()) {
        if (at.gamma <= 0.0 || std::abs(at.b) <= cfg.bohr_threshold) continue;
        const auto& list = bohr->atoms();
        const auto it = std::min_element(list.begin(), list.end(), [&](const Atom& x, const Atom& y) {
          return std::abs(x.gamma - at.gamma) < std::abs(y.gamma - at.gamma);
        });
        if (it == list.end() || std::abs(it->gamma - at.gamma) > tol) {
          ++unmatched;
          continue;
        }
        ++compared;
        worst = std::max(worst, std::abs(it->b - at.b));
      }
      j["route_agreement"] = {{"compared", compared}, {"unmatched", unmatched}, {"max_atom_difference", worst},
                              {"d_difference", std::abs(bohr->d() - logderiv->measure.d())}};
    }
    if (logderiv && density_d) {
      const double bound = report.json["apset"]["density"]["error_bound"].get<double>();
      const double diff = std::abs(logderiv->measure.d() - *density_d);
      j["density_consistency"] = {{"logderiv_d", logderiv->measure.d()}, {"density_d", *density_d},
                                  {"difference", diff}, {"error_bound", bound}, {"consistent", diff <= bound}};
    }
  }

  const PointMeasure* best_measure() const {
    if (logderiv) return &logderiv->measure;
    if (bohr) return &*bohr;
    return nullptr;
  }

  void poisson_stage() {
    json& j = report.json["diffraction"]["poisson"];
    const PointMeasure* mu = best_measure();
    if (!mu || !a || a->empty()) {
      j = {{"present", false}};
      return;
    }
    GaussianSpec g;
    g.sigma = cfg.sigma;
    g.tail_tol = cfg.tail_tol;
    const PoissonResidual r = stage("diffraction/poisson", [&] { return poisson_residual(*a, *mu, g); });
    j = {{"present", true},
         {"measure", logderiv ? "logderiv" : "bohr"},
         {"sigma", g.sigma},
         {"residual", r.residual},
         {"point_side", r.point_side},
         {"spectral_side", to_json(r.spectral_side)},
         {"point_tail", r.point_tail},
         {"spectral_tail", r.spectral_tail}};
    if (bohr && logderiv) {
      const PoissonResidual rb = stage("diffraction/poisson", [&] { return poisson_residual(*a, *bohr, g); });
      j["bohr_residual"] = rb.residual;
    }
    g.enforce_tails = false;
    for (double t : geometric_grid(4.0, reach(*a))) {
      const ZeroSet part = restrict(*a, {-t, t});
      const PoissonResidual rt = poisson_residual(part, *mu, g);
      report.plot.push_back({"poisson_residual_vs_T", t, rt.residual});
    }
  }

  void growth_stage(const PointMeasure& mu) {
    std::vector<double> s_grid;
    const double top = std::max(1.0, mu.cutoff());
    for (int k = 1; k <= 100; ++k) s_grid.push_back(top * k / 100.0);
    const GrowthProfile gp = growth_profile(mu, s_grid);
    json m = json::array();
    for (const auto& [s, v] : gp.m_of_s) {
      m.push_back(json::array({s, v}));
      report.plot.push_back({"m_of_s", s, v});
    }
    report.json["diffraction"]["growth"] = {{"t3", gp.t3_value}, {"kappa_fit", gp.kappa_fit}, {"m_of_s", m}};
  }

  void reconstruct_stage(const PointMeasure& mu, const char* source) {
    json& j = report.json["reconstruct"];
    j["source"] = source;
    LogSeriesOptions lo;
    lo.t3_budget = cfg.t3_budget;
    lo.strict = true;
    lo.algebra = cfg.algebra;
    const LogSeries ls = stage("reconstruct/log_series", [&] { return log_series_at_height_one(mu, mu.d(), lo); });
    j["log_series"] = {{"terms", ls.series.size()}, {"norm", ls.norm}, {"t3", ls.t3_value},
                       {"t3_budget", cfg.t3_budget}, {"tail_bound", ls.tail_bound}};
    const Rebuilt rb = stage("reconstruct/rebuild", [&] { return rebuild_dirichlet(mu, mu.d(), lo); });
    report.rebuilt = rb.sum;
    j["rebuilt"] = {{"terms", rb.sum.size()},
                    {"spectrum_width", rb.spectrum_width},
                    {"extremes_attained", rb.extremes_attained},
                    {"degenerate", rb.degenerate},
                    {"discarded_mass", rb.sum.discarded_mass()},
                    {"beyond_width_mass", rb.beyond_width_mass}};

    const double d = mu.d();
    if (a && !a->empty() && rb.sum.size() >= 2) {
      const double half = std::min(20.0, 0.5 * reach(*a));
      const Window w = f ? safe_window(*f, {-half, half}) : Window{-half, half};
      const ZeroSet mine = restrict(*a, w);
      const ZeroSet theirs = stage("reconstruct/roundtrip", [&] { return find_real_zeros(rb.sum, w, zero_opts()); });
      json rt = {{"window", to_json(w)},
                 {"original_count", mine.total_multiplicity()},
                 {"rebuilt_count", theirs.total_multiplicity()}};
      if (mine.points().size() == theirs.points().size()) {
        double err = 0.0;
        bool same_mult = true;
        for (std::size_t k = 0; k < mine.points().size(); ++k) {
          err = std::max(err, std::abs(mine.points()[k].point - theirs.points()[k].point));
          same_mult = same_mult && mine.points()[k].multiplicity == theirs.points()[k].multiplicity;
        }
        rt["max_zero_error"] = err;
        rt["multiplicities_match"] = same_mult;
      } else {
        rt["max_zero_error"] = nullptr;
        rt["multiplicities_match"] = false;
      }
      j["roundtrip"] = rt;
    }

    std::vector<double> x_grid;
    for (double x : {10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0}) x_grid.push_back(x);
    const GReport g = stage("reconstruct/g_function", [&] { return g_boundedness(mu, x_grid); });
    json windows = json::array();
    for (const auto& [x, s] : g.windows) {
      windows.push_back(json::array({x, s}));
      report.plot.push_back({"g_window_sup", x, s});
    }
    j["g"] = {{"verdict", to_string(g.bounded_verdict)}, {"slope_fit", g.slope_fit}, {"windows", windows}};

    json ty;
    ty["target"] = kPi * d;
    const std::vector<double> ys{10.0, 20.0};
    if (rb.sum.size() >= 2) {
      const TypeEstimate t = stage("reconstruct/exponential_type", [&] { return exponential_type(centered(rb.sum), ys); });
      ty["rebuilt"] = {{"estimate", t.estimate}, {"raw", t.raw}};
    }
    if (f) {
      const TypeEstimate t = stage("reconstruct/exponential_type", [&] { return exponential_type(centered(*f), ys); });
      ty["input"] = {{"estimate", t.estimate}, {"raw", t.raw}};
    }
    if (a && !a->empty() && reach(*a) > 100.0) {
      const TypeEstimate t = stage("reconstruct/exponential_type", [&] { return exponential_type(*a, ys); });
      ty["zeros"] = {{"estimate", t.estimate}, {"raw", t.raw}};
    }
    j["exponential_type"] = ty;
  }
};

}  // namespace

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::analyze: return "analyze";
    case Command::zeros: return "zeros";
    case Command::diffract: return "diffract";
    case Command::poisson: return "poisson";
    case Command::reconstruct: return "reconstruct";
    case Command::apset: return "apset";
  }
  return "unknown";
}

void apply_environment(RunConfig& cfg) {
  const char* v = std::getenv("QCLAB_MAX_TERMS");
  if (!v || !*v) return;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0' || n == 0 || v[0] == '-') {
    throw std::invalid_argument(std::string("QCLAB_MAX_TERMS must be a positive integer, got '") + v + "'");
  }
  cfg.algebra.max_terms = static_cast<std::size_t>(n);
}

LoadedInput parse_inputs(const std::filesystem::path& path, std::optional<InputKind> expected,
                         std::optional<Window> window, const AlgebraOptions& opts) {
  LoadedInput in;
  in.kind = detect_kind(path);
  if (expected && *expected != in.kind) {
    throw Error(ErrorKind::parse, std::string("expected ") + to_string(*expected) + " input, found " +
                                      to_string(in.kind));
  }
  switch (in.kind) {
    case InputKind::exp_sum:
      in.value = load_exp_sum(path, &in.warnings, opts);
      break;
    case InputKind::point_measure:
      in.value = load_point_measure(path, &in.warnings);
      break;
    case InputKind::zero_set: {
      std::optional<Window> w = window;
      in.window_source = "flag";
      if (!w) {
        std::filesystem::path sidecar = path;
        sidecar += ".json";
        if (std::filesystem::exists(sidecar)) {
          std::ifstream s(sidecar);
          try {
            const auto doc = nlohmann::json::parse(s);
            const auto& arr = doc.at("window");
            w = Window{arr.at(0).get<double>(), arr.at(1).get<double>()};
          } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::parse, "sidecar " + sidecar.string() + ": " + e.what());
          }
          in.window_source = "sidecar";
        } else {
          in.window_source = "hull";
        }
      }
      ZeroSet a = load_zero_set(path, w, &in.warnings);
      in.zero_window = a.window();
      in.value = std::move(a);
      break;
    }
  }
  return in;
}

Report run_pipeline(const RunConfig& cfg) {
  Run run{cfg, {}, {}, {}, {}, {}, {}};
  json& doc = run.report.json;
  doc["schema"] = 1;
  doc["command"] = to_string(cfg.command);

  const LoadedInput in = stage("input", [&] { return parse_inputs(cfg.input, {}, cfg.window, cfg.algebra); });
  doc["input"] = {{"path", cfg.input.filename().string()}, {"kind", to_string(in.kind)}, {"warnings", in.warnings}};
  if (in.zero_window) doc["input"]["window_source"] = in.window_source;
  doc["config"] = config_json(cfg);

  if (const auto* f = std::get_if<ExpSum>(&in.value)) run.f = *f;
  if (const auto* a = std::get_if<ZeroSet>(&in.value)) {
    run.a = *a;
    run.report.zeros = *a;
    doc["zeros"] = {{"window", to_json(a->window())}, {"count", a->total_multiplicity()},
                    {"distinct", a->distinct()}, {"source", "input"}};
  }
  const PointMeasure* given = std::get_if<PointMeasure>(&in.value);

  auto require = [&](bool ok, const char* what) {
    if (!ok) {
      throw StageError("input", ErrorKind::invalid_input,
                       std::string(to_string(cfg.command)) + " needs " + what + ", got " + to_string(in.kind));
    }
  };
  auto need_zeros = [&] {
    if (!run.a && run.f) {
      if (run.f->empty()) throw StageError("zeros/find_real_zeros", ErrorKind::domain, "input sum is empty");
      run.zeros_stage();
    }
  };

  switch (cfg.command) {
    case Command::zeros:
      require(run.f.has_value(), "an exponential sum");
      need_zeros();
      break;
    case Command::apset:
      require(!given, "an exponential sum or a zero set");
      need_zeros();
      run.apset_stage();
      break;
    case Command::diffract:
    case Command::poisson:
      require(!given, "an exponential sum or a zero set");
      need_zeros();
      run.logderiv_stage();
      run.bohr_stage();
      run.agreement();
      if (cfg.command == Command::poisson) {
        run.poisson_stage();
      } else if (const PointMeasure* mu = run.best_measure()) {
        run.report.measure = *mu;
        run.growth_stage(*mu);
      }
      break;
    case Command::reconstruct:
      if (given) {
        run.report.measure = *given;
        run.reconstruct_stage(*given, "input");
      } else {
        require(run.f.has_value(), "a point measure or an exponential sum");
        run.logderiv_stage();
        run.report.measure = run.logderiv->measure;
        run.reconstruct_stage(run.logderiv->measure, "logderiv");
      }
      break;
    case Command::analyze:
      if (given) {
        run.report.measure = *given;
        run.growth_stage(*given);
        run.reconstruct_stage(*given, "input");
        break;
      }
      need_zeros();
      run.apset_stage();
      run.logderiv_stage();
      run.bohr_stage();
      run.agreement();
      run.poisson_stage();
      if (const PointMeasure* mu = run.best_measure()) {
        run.report.measure = *mu;
        run.growth_stage(*mu);
        run.reconstruct_stage(*mu, run.logderiv ? "logderiv" : "bohr");
      }
      break;
  }
  return std::move(run.report);
}

std::vector<std::filesystem::path> emit_outputs(const Report& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;
  auto write = [&](const char* name, auto&& body) {
    const std::filesystem::path p = dir / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + p.string() + "'");
    body(out);
    out.flush();
    if (!out) throw Error(ErrorKind::io, "write failed for '" + p.string() + "'");
    written.push_back(p);
  };

  write("report.json", [&](std::ostream& out) { out << report.json.dump(2) << '\n'; });
  if (report.zeros) write("zeros.csv", [&](std::ostream& out) { write_zero_set(out, *report.zeros); });
  if (report.measure) write("measure.csv", [&](std::ostream& out) { write_point_measure(out, *report.measure); });
  if (report.rebuilt) write("rebuilt.csv", [&](std::ostream& out) { write_exp_sum(out, *report.rebuilt); });
  if (!report.plot.empty()) {
    write("plot_data.csv", [&](std::ostream& out) {
      out << "series,x,y\n";
      for (const auto& r : report.plot) out << r.series << ',' << format_double(r.x) << ',' << format_double(r.y) << '\n';
    });
  }
  return written;
}

nlohmann::ordered_json error_document(const StageError& e) {
  return {{"schema", 1}, {"error", {{"stage", e.stage()}, {"kind", to_string(e.kind())}, {"message", e.what()}}}};
}

}  // namespace qclab::cli
