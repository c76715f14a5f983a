// End-to-end acceptance checks. One PASS/FAIL line per criterion; exit status
// is the number of failures.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qclab/qclab.hpp"

namespace {

using namespace qclab;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) detail << "; ";
      detail << what;
      ok = false;
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ExpSum cos_sum(double a = 1.0) { return canonicalize({{-0.5 * a, 0.5}, {0.5 * a, 0.5}}); }
ExpSum union_sum() { return multiply(cos_sum(), cos_sum(kSqrt2)); }

ZeroSet lattice(double offset, double spacing, Window w, int mult = 1) {
  std::vector<Zero> pts;
  const long k0 = static_cast<long>(std::ceil(w.lo / spacing - offset));
  const long k1 = static_cast<long>(std::floor(w.hi / spacing - offset));
  for (long k = k0; k <= k1; ++k) pts.push_back({(static_cast<double>(k) + offset) * spacing, mult});
  return ZeroSet(w, std::move(pts));
}

ZeroSet union_lattice(Window w) {
  const ZeroSet a = lattice(0.5, 1.0, w);
  const ZeroSet b = lattice(0.5, 1.0 / kSqrt2, w);
  std::vector<Zero> pts(a.points().begin(), a.points().end());
  pts.insert(pts.end(), b.points().begin(), b.points().end());
  return ZeroSet(w, std::move(pts));
}

PointMeasure half_integer_measure(int kmax) {
  std::vector<Atom> atoms;
  for (int k = 1; k <= kmax; ++k) {
    const double s = (k % 2 == 0) ? 1.0 : -1.0;
    atoms.push_back({static_cast<double>(k), s});
    atoms.push_back({-static_cast<double>(k), s});
  }
  return PointMeasure(1.0, std::move(atoms));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// max |b_bohr - b_logderiv| over every atom either route reports below gamma_max
double atom_gap(const PointMeasure& bohr, const PointMeasure& ld, double gamma_max, double tol) {
  double worst = std::abs(bohr.d() - ld.d());
  for (const auto& at : ld.atoms()) {
    if (std::abs(at.gamma) < gamma_max) worst = std::max(worst, std::abs(bohr.mass_at(at.gamma, tol) - at.b));
  }
  for (const auto& at : bohr.atoms()) {
    if (std::abs(at.gamma) < gamma_max) worst = std::max(worst, std::abs(ld.mass_at(at.gamma, tol) - at.b));
  }
  return worst;
}

std::vector<double> integer_grid(int kmax) {
  std::vector<double> g;
  for (int k = -kmax; k <= kmax; ++k) g.push_back(k);
  return g;
}

void lattice_pipeline(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const ZeroSet z = find_real_zeros(cos_sum(), {-1000.0, 1000.0});
  c.expect(z.distinct() == 2000, "zero count " + std::to_string(z.distinct()));
  double err = 0.0;
  for (std::size_t k = 0; k < z.distinct(); ++k) {
    const auto& p = z.points()[k];
    c.expect(p.multiplicity == 1, "multiple zero");
    err = std::max(err, std::abs(p.point - (static_cast<double>(k) - 999.5)));
  }
  c.expect(err < 1e-10, "zero error " + num(err));
  const double d = density(z).d;
  c.expect(std::abs(d - 1.0) <= 0.01, "density " + num(d));
  LogDerivOptions o;
  o.cutoff = 11.0;
  const PointMeasure mu = logderiv_measure(cos_sum(), o).measure;
  c.expect(std::abs(mu.d() - 1.0) < 1e-10, "logderiv d " + num(mu.d()));
  for (int k = 1; k <= 10; ++k) {
    const double want = (k % 2 == 0) ? 1.0 : -1.0;
    for (double g : {-k, k}) {
      const double e = std::abs(mu.mass_at(g) - want);
      if (!(e < 1e-10)) c.expect(false, "b_" + std::to_string(k) + " error " + num(e));
    }
  }
  const double s = seconds_since(t0);
  c.expect(s < 10.0, "runtime " + num(s) + " s");
  c.detail << (c.ok ? "zero error " + num(err) + ", d " + num(d) + ", " + num(s) + " s" : "");
}

void route_agreement(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const double t = 2000.0;
  const double tol = 2.0 / t;
  const double gamma_max = 6.0;
  LogDerivOptions o;
  o.cutoff = gamma_max + 1.0;

  const ZeroSet zc = find_real_zeros(cos_sum(), {-2000.25, 2000.25});
  const PointMeasure ldc = logderiv_measure(cos_sum(), o).measure;
  const double gc = atom_gap(bohr_scan(zc, integer_grid(6), t, 0.1), ldc, gamma_max, tol);
  c.expect(gc < 0.01, "cos gap " + num(gc));

  const ExpSum u = union_sum();
  const ZeroSet zu = find_real_zeros(u, safe_window(u, {-2000.25, 2000.25}));
  const PointMeasure ldu = logderiv_measure(u, o).measure;
  // grid from the exact atom positions, plus midpoints that must come back empty
  std::vector<double> grid{0.0};
  for (const auto& at : ldu.atoms()) {
    if (std::abs(at.gamma) < gamma_max) grid.push_back(at.gamma);
  }
  const std::size_t n = grid.size();
  for (std::size_t k = 1; k + 1 < n; ++k) grid.push_back(0.5 * (grid[k] + grid[k + 1]));
  std::sort(grid.begin(), grid.end());
  const PointMeasure scanned = bohr_scan(zu, grid, t, 0.1);
  const double gu = atom_gap(scanned, ldu, gamma_max, tol);
  c.expect(gu < 0.01, "union scan gap " + num(gu));
  const PointMeasure searched = bohr_search(zu, gamma_max, t, 0.1);
  const double gs = atom_gap(searched, ldu, gamma_max - 2.0 * tol, tol);
  c.expect(gs < 0.01, "union search gap " + num(gs));
  const double d = density(zu).d;
  c.expect(std::abs(d - (1.0 + kSqrt2)) <= 0.02, "union density " + num(d));
  const double s = seconds_since(t0);
  c.expect(s < 60.0, "runtime " + num(s) + " s");
  if (c.ok) {
    c.detail << "cos " << num(gc) << ", union scan " << num(gu) << ", search " << num(gs) << ", d " << num(d)
             << ", " << num(s) << " s";
  }
}

void poisson_identity(Check& c) {
  const double exact = poisson_residual(lattice(0.5, 1.0, {-50.0, 50.0}), half_integer_measure(20)).residual;
  c.expect(exact < 1e-8, "lattice residual " + num(exact));
  const ZeroSet a = union_lattice({-2000.25, 2000.25});
  std::vector<double> grid;
  for (int k = -6; k <= 6; ++k) {
    grid.push_back(k);
    if (k != 0) grid.push_back(k * kSqrt2);
  }
  const PointMeasure mu = bohr_scan(a, grid, 2000.0, 0.1);
  GaussianSpec g;
  g.enforce_tails = false;
  const double scanned = poisson_residual(a, mu, g).residual;
  c.expect(scanned < 1e-3, "union residual " + num(scanned));
  const double control = poisson_residual(a, mu.without(1.0), g).residual;
  c.expect(control > 1e-2, "control residual " + num(control));
  const double control_exact =
      poisson_residual(lattice(0.5, 1.0, {-50.0, 50.0}), half_integer_measure(20).without(1.0)).residual;
  c.expect(control_exact > 1e-2, "lattice control residual " + num(control_exact));
  if (c.ok) c.detail << "lattice " << num(exact) << ", union " << num(scanned) << ", control " << num(control);
}

void rebuild_roundtrip(Check& c) {
  // measure from the zeros themselves (Bohr means) and from the log derivative
  const ZeroSet z = find_real_zeros(cos_sum(), {-1000.0, 1000.0});
  const PointMeasure from_zeros = bohr_scan(z, integer_grid(10), 1000.0, 0.1);
  LogDerivOptions o;
  o.cutoff = 11.0;
  const PointMeasure from_f = logderiv_measure(cos_sum(), o).measure;
  double cerr = 0.0;
  for (const PointMeasure* mu : {&from_zeros, &from_f}) {
    const Rebuilt r = rebuild_dirichlet(*mu);
    if (r.sum.size() != 2) {
      c.expect(false, "rebuilt size " + std::to_string(r.sum.size()));
      continue;
    }
    for (const Term& t : r.sum.terms()) {
      cerr = std::max({cerr, std::abs(std::abs(t.omega) - 0.5), std::abs(t.q - complex(0.5, 0.0))});
    }
  }
  c.expect(cerr < 1e-8, "cos coefficient error " + num(cerr));

  const PointMeasure mu = logderiv_measure(union_sum(), o).measure;
  const Rebuilt r = rebuild_dirichlet(mu);
  const Window w = safe_window(r.sum, {-20.0, 20.0});
  const ZeroSet got = find_real_zeros(r.sum, w);
  const ZeroSet want = union_lattice(w);
  double uerr = 0.0;
  if (got.distinct() != want.distinct()) {
    c.expect(false, "union zero count " + std::to_string(got.distinct()) + " vs " +
                        std::to_string(want.distinct()));
  } else {
    for (std::size_t k = 0; k < got.distinct(); ++k) {
      uerr = std::max(uerr, std::abs(got.points()[k].point - want.points()[k].point));
    }
  }
  c.expect(uerr < 1e-4, "union zero error " + num(uerr));
  if (c.ok) c.detail << "cos " << num(cerr) << ", union zeros " << num(uerr);
}

void g_and_type(Check& c) {
  const std::vector<double> xs{10.0, 100.0, 1000.0};
  const GReport lat = g_boundedness(half_integer_measure(20), xs);
  c.expect(lat.bounded_verdict == Verdict::bounded, std::string("lattice verdict ") + to_string(lat.bounded_verdict));
  LogDerivOptions o;
  o.cutoff = 11.0;
  const GReport uni = g_boundedness(logderiv_measure(union_sum(), o).measure, xs);
  c.expect(uni.bounded_verdict == Verdict::bounded, std::string("union verdict ") + to_string(uni.bounded_verdict));
  for (const auto& [x, sup] : lat.windows) c.expect(sup == 0.0, "lattice g nonzero at " + num(x));

  const PointMeasure single(1.0, {{-0.6, -0.6}, {0.6, -0.6}});
  const GReport one = g_boundedness(single, {10.0, 100.0});
  double sup = 0.0;
  for (const auto& w : one.windows) sup = std::max(sup, w.second);
  c.expect(std::abs(sup - 2.0) < 1e-12, "single atom sup " + num(sup));

  const std::vector<double> ys{10.0, 20.0};
  const double pd_union = kPi * (1.0 + kSqrt2);
  struct Case {
    std::string name;
    double estimate;
    double target;
  };
  const std::vector<Case> cases{
      {"cos", exponential_type(cos_sum(), ys).estimate, kPi},
      {"union", exponential_type(union_sum(), ys).estimate, pd_union},
      {"cos rebuilt", exponential_type(rebuild_dirichlet(half_integer_measure(10)).sum, ys).estimate, kPi},
      {"union rebuilt", exponential_type(rebuild_dirichlet(logderiv_measure(union_sum(), o).measure).sum, ys).estimate,
       pd_union},
      {"half-integer product", exponential_type(lattice(0.5, 1.0, {-5000.0, 5000.0}), ys).estimate, kPi},
      {"union product", exponential_type(union_lattice({-5000.25, 5000.25}), ys).estimate, pd_union},
  };
  double worst = 0.0;
  for (const auto& k : cases) {
    const double rel = std::abs(k.estimate - k.target) / k.target;
    worst = std::max(worst, rel);
    c.expect(rel <= 0.05, k.name + " type off by " + num(rel));
  }
  if (c.ok) c.detail << "single atom sup " << num(sup) << ", worst type error " << num(worst);
}

void apset_properties(Check& c) {
  std::mt19937_64 rng(2024);
  const ZeroSet cos_zeros = find_real_zeros(cos_sum(), {-500.0, 500.0});
  const ExpSum u = union_sum();
  const ZeroSet union_zeros = find_real_zeros(u, safe_window(u, {-500.25, 500.25}));
  const std::vector<std::pair<std::string, ZeroSet>> fixtures{
      {"half-integers", lattice(0.5, 1.0, {-500.0, 500.0})},
      {"doubled half-integers", lattice(0.5, 1.0, {-500.0, 500.0}, 2)},
      {"union", union_lattice({-500.25, 500.25})},
      {"cos zeros", cos_zeros},
      {"union zeros", union_zeros},
  };
  long windows = 0;
  for (const auto& [name, a] : fixtures) {
    const CountingConstants k = counting_constants(a);
    const double lo = a.window().lo, hi = a.window().hi;
    std::uniform_real_distribution<double> hs(0.0, 50.0);
    bool ok = true;
    for (int i = 0; i < 10000; ++i) {
      const double h = hs(rng);
      std::uniform_real_distribution<double> xs(lo, hi - std::max(h, 1.0));
      const double x1 = xs(rng), x2 = xs(rng);
      ok = ok && a.count_closed(x1, x1 + 1.0) <= k.k1;
      ok = ok && a.count_half_open(x1, x1 + 1.0) <= k.k1_half_open;
      ok = ok && std::abs(a.count_half_open(x1, x1 + h) - a.count_half_open(x2, x2 + h)) <= k.k2;
      ++windows;
    }
    c.expect(ok, name + " counting bound violated");

    const double d = density(a).d;
    const AlmostPeriodReport ap = almost_periods(a, 0.05, {0.0, 100.0});
    for (const auto& p : ap.periods) {
      if (std::abs(p.tau - static_cast<double>(p.shift) / ap.d) > ap.epsilon) {
        c.expect(false, name + " almost period " + num(p.tau));
      }
    }
    const PhiRepresentation phi = phi_representation(a, d);
    const auto e = a.expanded();
    bool exact = true;
    for (long n = phi.first_index(); n <= phi.last_index(); ++n) {
      exact = exact && phi.point(n) == e[static_cast<std::size_t>(n + phi.index_offset())];
    }
    c.expect(exact, name + " phi identity not exact");
  }
  const ZeroSet q = lattice(0.75, 1.0, {-1e6 - 1.0, 1e6 + 1.0});
  const double sum = lindelof_sum(q, {1e6}).sums.back();
  c.expect(std::abs(sum + kPi) < 1e-3, "lindelof " + num(sum));
  if (c.ok) c.detail << windows << " windows, lindelof error " << num(std::abs(sum + kPi));
}

ExpSum random_sum(std::mt19937_64& rng, int n, double wmax) {
  std::uniform_real_distribution<double> freq(-wmax, wmax);
  std::normal_distribution<double> coef(0.0, 1.0);
  std::vector<Term> t;
  for (int i = 0; i < n; ++i) t.push_back({freq(rng), complex(coef(rng), coef(rng))});
  return canonicalize(std::move(t));
}

void algebra_suite(Check& c) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(1, 12);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const ExpSum f = random_sum(rng, size(rng), 4.0);
    const ExpSum g = random_sum(rng, size(rng), 4.0);
    if (multiply(f, g).wiener_norm() > f.wiener_norm() * g.wiener_norm() * (1.0 + 1e-12)) ++violations;
  }
  c.expect(violations == 0, std::to_string(violations) + " submultiplicativity violations");

  const ExpSum one = canonicalize({{0.0, 1.0}});
  double worst_residual = 0.0, worst_norm = 0.0;
  int checked = 0;
  std::uniform_real_distribution<double> heights(-0.5, 2.0);
  for (int i = 0; i < 400; ++i) {
    const ExpSum f = random_sum(rng, 2 + i % 6, 1.5);
    if (f.size() < 2) continue;
    // fixed heights: keep the ones with ||H|| < 2/3
    const double s = heights(rng);
    if (normalized_remainder(f, s).wiener_norm() < 2.0 / 3.0) {
      const NeumannInverse inv = neumann_inverse(f, s);
      worst_residual = std::max(worst_residual, subtract(multiply(at_height(f, s), inv.inverse), one).wiener_norm());
      ++checked;
    }
    const NeumannInverse a = neumann_inverse(f, std::nullopt);
    worst_norm = std::max(worst_norm, a.series_norm);
    if (a.h_norm < 2.0 / 3.0) {
      worst_residual =
          std::max(worst_residual, subtract(multiply(at_height(f, a.height), a.inverse), one).wiener_norm());
    }
  }
  c.expect(checked > 50, "too few fixed-height cases " + std::to_string(checked));
  c.expect(worst_residual < 1e-10, "Neumann residual " + num(worst_residual));
  c.expect(worst_norm < 3.0, "inverse norm " + num(worst_norm));
  if (c.ok) c.detail << "residual " << num(worst_residual) << ", inverse norm " << num(worst_norm);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism(Check& c) {
  const fs::path root = fs::temp_directory_path() / "qclab_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  std::ofstream(root / "union.csv") << "omega,re,im\n-1.2071067811865475,0.25,0\n-0.20710678118654752,0.25,0\n"
                                       "0.20710678118654752,0.25,0\n1.2071067811865475,0.25,0\n";
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string(QCLAB_BINARY) + " analyze --input " + (root / "union.csv").string() +
                            " --seed 7 --out " + (root / run).string() + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    c.expect(WIFEXITED(status) && WEXITSTATUS(status) == 0, std::string("run ") + run + " failed");
  }
  if (!c.ok) return;
  const std::string report = slurp(root / "a" / "report.json");
  c.expect(!report.empty(), "empty report");
  for (const char* name : {"report.json", "zeros.csv", "measure.csv", "rebuilt.csv", "plot_data.csv"}) {
    c.expect(slurp(root / "a" / name) == slurp(root / "b" / name), std::string(name) + " differs");
  }
  if (c.ok) c.detail << "report " << report.size() << " bytes identical";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"1 lattice pipeline", lattice_pipeline},
      {"2 route agreement", route_agreement},
      {"3 poisson identity", poisson_identity},
      {"4 rebuild roundtrip", rebuild_roundtrip},
      {"5 g function and type", g_and_type},
      {"6 point set properties", apset_properties},
      {"7 algebra suite", algebra_suite},
      {"8 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << "exception: " << e.what();
    }
    if (!c.ok) ++failures;
    std::printf("%s %s: %s\n", c.ok ? "PASS" : "FAIL", name.c_str(), c.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures;
}
