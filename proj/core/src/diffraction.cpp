#include "qclab/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "qclab/apset.hpp"
#include "qclab/error.hpp"
#include "phase.hpp"

namespace qclab {

namespace {

using detail::Accumulator;
using detail::kTwoPi;
constexpr double kPi = std::numbers::pi;

bool finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Runs body(i) for i in [0, n) on a few threads. Each index writes only its
// own slot, so the result does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, Body body) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>({hw, 8, (n + 15) / 16});
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Points with |a| < T, expanded into (point, multiplicity) pairs.
struct Sample {
  std::vector<double> points;
  std::vector<double> weights;
};

Sample sample_within(const ZeroSet& a, double t) {
  const Window w = a.window();
  if (!(t > 0.0) || -t < w.lo || t > w.hi) {
    std::ostringstream os;
    os << "averaging length T = " << t << " needs [-T, T] inside the window [" << w.lo << ", "
       << w.hi << "]";
    throw Error(ErrorKind::domain, os.str());
  }
  Sample s;
  for (const auto& z : a.points()) {
    if (std::abs(z.point) < t) {
      s.points.push_back(z.point);
      s.weights.push_back(static_cast<double>(z.multiplicity));
    }
  }
  return s;
}

complex bohr_mean(const Sample& s, double gamma, double t) {
  Accumulator re;
  Accumulator im;
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    const complex e = detail::cis_cycles(-detail::product_cycles(gamma, s.points[k]));
    re.add(s.weights[k] * e.real());
    im.add(s.weights[k] * e.imag());
  }
  return complex(re.value(), im.value()) / (2.0 * t);
}

// Bohr means at T and T/2 over precomputed samples.
class BohrEvaluator {
 public:
  BohrEvaluator(const ZeroSet& a, double t)
      : t_(t), full_(sample_within(a, t)), half_(sample_within(a, 0.5 * t)) {}

  complex at(double gamma) const { return bohr_mean(full_, gamma, t_); }
  complex at_half(double gamma) const { return bohr_mean(half_, gamma, 0.5 * t_); }
  double t() const { return t_; }

 private:
  double t_;
  Sample full_;
  Sample half_;
};

long unit_count_bound(const ZeroSet& a) {
  CountingOptions opts;
  opts.samples = 0;
  return counting_constants(a, opts).k1;
}

// Mirror positive-frequency atoms by conjugate symmetry.
std::vector<Atom> with_mirror(const std::vector<Atom>& positive) {
  std::vector<Atom> all;
  all.reserve(2 * positive.size());
  for (const auto& at : positive) {
    all.push_back(at);
    all.push_back({-at.gamma, std::conj(at.b)});
  }
  return all;
}

// Maximizes |est(gamma)| on [lo, hi] by golden section; the interval is
// expected to lie inside a single main lobe.
double golden_peak(const BohrEvaluator& ev, double lo, double hi) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - r * (hi - lo);
  double x2 = lo + r * (hi - lo);
  double f1 = std::abs(ev.at(x1));
  double f2 = std::abs(ev.at(x2));
  for (int it = 0; it < 80 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo)); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = std::abs(ev.at(x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = std::abs(ev.at(x1));
    }
  }
  return 0.5 * (lo + hi);
}

double gaussian_tail(double start, double scale, double amplitude) {
  // sum_{j>=0} amplitude * exp(-pi ((start + j) / scale)^2), start >= 0
  double total = 0.0;
  for (int j = 0; j < 100000; ++j) {
    const double x = (start + j) / scale;
    const double term = amplitude * std::exp(-kPi * x * x);
    total += term;
    if (term < 1e-300 || (term < 1e-18 * total && x > 1.0)) break;
  }
  return total;
}

}  // namespace

PointMeasure::PointMeasure(double d, std::vector<Atom> atoms, std::optional<double> cutoff)
    : d_(d) {
  if (!std::isfinite(d) || d < 0.0) {
    throw Error(ErrorKind::invalid_input, "density d must be finite and nonnegative");
  }
  for (const auto& at : atoms) {
    if (!std::isfinite(at.gamma) || !finite(at.b)) {
      throw Error(ErrorKind::invalid_input, "atom with non-finite frequency or mass");
    }
    if (at.gamma == 0.0) {
      throw Error(ErrorKind::invalid_input, "the mass at gamma = 0 is carried by d, not by an atom");
    }
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return x.gamma < y.gamma; });
  for (const auto& at : atoms) {
    if (!atoms_.empty() && atoms_.back().gamma == at.gamma) {
      atoms_.back().b += at.b;
    } else {
      atoms_.push_back(at);
    }
  }
  if (cutoff) {
    if (!std::isfinite(*cutoff) || *cutoff < 0.0) {
      throw Error(ErrorKind::invalid_input, "measure cutoff must be finite and nonnegative");
    }
    cutoff_ = *cutoff;
  } else {
    for (const auto& at : atoms_) cutoff_ = std::max(cutoff_, std::abs(at.gamma));
  }
}

complex PointMeasure::mass_at(double gamma, double tol) const {
  if (std::abs(gamma) <= tol) return d_;
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), gamma - tol,
                             [](const Atom& at, double g) { return at.gamma < g; });
  if (it != atoms_.end() && std::abs(it->gamma - gamma) <= tol) return it->b;
  return 0.0;
}

double PointMeasure::conjugate_symmetry_error(double tol) const {
  double err = 0.0;
  for (const auto& at : atoms_) {
    err = std::max(err, std::abs(mass_at(-at.gamma, tol) - std::conj(at.b)));
  }
  return err;
}

PointMeasure PointMeasure::without(double gamma, double tol) const {
  std::vector<Atom> kept;
  for (const auto& at : atoms_) {
    if (std::abs(std::abs(at.gamma) - std::abs(gamma)) > tol) kept.push_back(at);
  }
  return PointMeasure(d_, std::move(kept), cutoff_);
}

BohrEstimate bohr_coefficient(const ZeroSet& a, double gamma, double t) {
  if (!std::isfinite(gamma)) throw Error(ErrorKind::invalid_input, "non-finite gamma");
  const Sample s = sample_within(a, t);
  BohrEstimate est;
  est.value = bohr_mean(s, gamma, t);
  est.error = static_cast<double>(unit_count_bound(a)) / t;
  return est;
}

PointMeasure bohr_scan(const ZeroSet& a, const std::vector<double>& grid, double t,
                       double threshold) {
  const BohrEvaluator ev(a, t);
  std::vector<complex> full(grid.size());
  std::vector<complex> half(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    full[i] = ev.at(grid[i]);
    half[i] = ev.at_half(grid[i]);
  });

  std::vector<Atom> atoms;
  double reach = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    reach = std::max(reach, std::abs(grid[i]));
    if (grid[i] == 0.0) continue;
    if (std::abs(full[i]) > threshold && std::abs(full[i] - half[i]) < 0.25 * threshold) {
      atoms.push_back({grid[i], full[i]});
    }
  }
  const double d = std::max(0.0, ev.at(0.0).real());
  return PointMeasure(d, std::move(atoms), reach);
}

PointMeasure bohr_search(const ZeroSet& a, double gamma_max, double t, double threshold,
                         const BohrSearchOptions& opts) {
  if (!(gamma_max > 0.0) || !(threshold > 0.0) || !(opts.oversample >= 2.0) ||
      !(opts.start_t > 0.0)) {
    throw Error(ErrorKind::invalid_input, "bohr_search needs positive gamma_max, threshold, start_t and oversample >= 2");
  }
  std::vector<double> levels{std::min(t, opts.start_t)};
  while (levels.back() < t) levels.push_back(std::min(t, 2.0 * levels.back()));

  // Coarse pass: local maxima of |estimate| above threshold / 2.
  const BohrEvaluator coarse(a, levels.front());
  const double h0 = 1.0 / (opts.oversample * levels.front());
  const auto n0 = static_cast<std::size_t>(std::ceil((gamma_max + 2.0 * h0) / h0)) + 1;
  std::vector<double> mag(n0);
  parallel_for(n0, [&](std::size_t i) { mag[i] = std::abs(coarse.at(h0 * static_cast<double>(i))); });
  std::vector<double> candidates;
  for (std::size_t i = 1; i + 1 < n0; ++i) {
    if (mag[i] > 0.5 * threshold && mag[i] >= mag[i - 1] && mag[i] > mag[i + 1]) {
      candidates.push_back(h0 * static_cast<double>(i));
    }
  }

  // Refine level by level. Every local maximum above threshold / 2 in the
  // neighbourhood of a candidate survives, so peaks that were one lobe at
  // the coarser level split once the finer level resolves them.
  std::vector<BohrEvaluator> evaluators;
  evaluators.reserve(levels.size());
  for (std::size_t l = 1; l < levels.size(); ++l) evaluators.emplace_back(a, levels[l]);
  const BohrEvaluator& final_ev = evaluators.empty() ? coarse : evaluators.back();

  for (const auto& ev : evaluators) {
    const double h = 1.0 / (opts.oversample * ev.t());
    std::vector<std::vector<std::pair<double, double>>> found(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t c) {
      double m[17];
      for (int k = -8; k <= 8; ++k) m[k + 8] = std::abs(ev.at(candidates[c] + h * k));
      for (int k = -8; k <= 8; ++k) {
        const double v = m[k + 8];
        if (v < 0.5 * threshold) continue;
        if ((k == -8 || m[k + 7] <= v) && (k == 8 || m[k + 9] < v)) {
          found[c].emplace_back(candidates[c] + h * k, v);
        }
      }
    });
    std::vector<std::pair<double, double>> next;
    for (const auto& list : found) next.insert(next.end(), list.begin(), list.end());
    std::sort(next.begin(), next.end());
    candidates.clear();
    double last_mag = 0.0;
    for (const auto& [g, v] : next) {
      if (!candidates.empty() && g - candidates.back() < 1.5 * h) {
        if (v > last_mag) {
          candidates.back() = g;
          last_mag = v;
        }
      } else {
        candidates.push_back(g);
        last_mag = v;
      }
    }
  }

  std::vector<double> located(candidates.size());
  std::vector<double> level_peak(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t c) {
    const double h = 1.0 / (opts.oversample * final_ev.t());
    located[c] = golden_peak(final_ev, candidates[c] - h, candidates[c] + h);
    level_peak[c] = std::abs(final_ev.at(located[c]));
  });

  // Merge candidates that converged to the same peak, keeping the larger.
  std::vector<std::pair<double, double>> peaks;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (located[c] > 0.5 / t && located[c] <= gamma_max) peaks.emplace_back(located[c], level_peak[c]);
  }
  std::sort(peaks.begin(), peaks.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& p : peaks) {
    if (!merged.empty() && p.first - merged.back().first < 0.25 / t) {
      if (p.second > merged.back().second) merged.back() = p;
    } else {
      merged.push_back(p);
    }
  }

  std::vector<Atom> positive;
  for (const auto& [g, m] : merged) {
    const complex full = final_ev.at(g);
    const complex half = final_ev.at_half(g);
    if (std::abs(full) > threshold && std::abs(full - half) < 0.25 * threshold) {
      positive.push_back({g, full});
    }
  }
  const double d = std::max(0.0, final_ev.at(0.0).real());
  return PointMeasure(d, with_mirror(positive), gamma_max);
}

LogDerivMeasure logderiv_measure(const ExpSum& f, const LogDerivOptions& opts) {
  if (f.size() < 2) {
    throw Error(ErrorKind::domain,
                "logarithmic derivative needs at least two terms: a single exponential has no zeros");
  }
  if (!(opts.cutoff > 0.0) || !std::isfinite(opts.cutoff)) {
    throw Error(ErrorKind::invalid_input, "cutoff must be positive and finite");
  }
  const AlgebraOptions& alg = opts.algebra;
  LogDerivMeasure out;
  const ExpSum fc = centered(f, alg);
  out.spectrum_shift = fc.min_frequency() - f.min_frequency();

  const auto terms = fc.terms();
  const double w1 = terms.front().omega;
  const complex q1 = terms.front().q;

  out.height = opts.height ? *opts.height : auto_height(fc).height;
  if (!std::isfinite(out.height)) throw Error(ErrorKind::invalid_input, "non-finite height");
  out.h_norm = normalized_remainder(fc, out.height, alg).wiener_norm();
  if (out.h_norm >= 1.0) {
    std::ostringstream os;
    os << "Neumann series diverges at height " << out.height << " (||H||_W = " << out.h_norm
       << "); choose a larger height";
    throw Error(ErrorKind::divergence, os.str());
  }

  // Formal series in e^{2 pi i x} (height-free): H, -H, and f'/(q1 e^{2 pi i w1 z}).
  std::vector<Term> h_terms;
  std::vector<Term> df_terms;
  double ratio_sum = 0.0;
  double c_bound = 0.0;
  for (const auto& t : terms) {
    const complex r = t.q / q1;
    const double gap = t.omega - w1;
    df_terms.push_back({gap, complex(0.0, kTwoPi * t.omega) * r});
    if (gap > 0.0) {
      h_terms.push_back({gap, -r});
      ratio_sum += std::abs(r);
    }
    c_bound = std::max(c_bound, std::abs(t.omega) * std::exp(kTwoPi * gap * out.height));
  }
  out.c_f_bound = 3.0 * kTwoPi * c_bound * (1.0 + ratio_sum);

  const double limit = opts.cutoff;
  const ExpSum minus_h = canonicalize(std::move(h_terms), alg);
  const ExpSum df = canonicalize(std::move(df_terms), alg);
  const double step = terms[1].omega - w1;
  const int max_power = static_cast<int>(std::ceil(limit / step)) + 1;

  ExpSum series = canonicalize({{0.0, 1.0}}, alg);
  ExpSum power = series;
  for (int j = 1; j <= max_power; ++j) {
    power = multiply_truncated(power, minus_h, limit, alg);
    if (power.empty()) break;
    series = add(series, power, alg);
  }
  const ExpSum p = multiply_truncated(df, series, limit, alg);
  out.terms = p.size();

  complex p0 = 0.0;
  std::vector<Atom> positive;
  for (const auto& t : p.terms()) {
    out.norm_at_height += std::abs(t.q) * std::exp(-kTwoPi * t.omega * out.height);
    if (std::abs(t.omega) <= alg.freq_tol) {
      p0 += t.q;
    } else if (t.omega < limit - alg.freq_tol) {
      positive.push_back({t.omega, complex(0.0, 1.0) * t.q / kTwoPi});
    }
  }
  const double d = (complex(0.0, 1.0) * p0 / kPi).real();
  const double floor = opts.atom_floor * std::max(1.0, d);
  std::erase_if(positive, [&](const Atom& at) { return std::abs(at.b) < floor; });

  if (opts.check_realness) {
    out.strip_height = zero_strip_height(fc);
    Window w;
    if (opts.realness_window) {
      w = *opts.realness_window;
    } else {
      const double half = 25.0 / std::max(d, 1e-3) + 1.0;
      w = safe_window(fc, {-half, half});
    }
    out.realness_window = w;
    out.realness = realness_check(fc, w, out.strip_height, opts.zeros);
    if (!out.realness.all_real) {
      std::ostringstream os;
      os << "f has non-real zeros: " << out.realness.total_count << " zeros in the strip over ["
         << w.lo << ", " << w.hi << "] but only " << out.realness.real_count << " real";
      throw Error(ErrorKind::domain, os.str());
    }
  }

  out.measure = PointMeasure(std::max(0.0, d), with_mirror(positive), limit);
  return out;
}

PoissonResidual poisson_residual(const ZeroSet& a, const PointMeasure& mu, const GaussianSpec& test) {
  const double sigma = test.sigma;
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::invalid_input, "Gaussian width sigma must be positive");
  }
  PoissonResidual r;

  // Sum of sigma exp(-pi sigma^2 a^2) over the points.
  Accumulator point_sum;
  for (const auto& z : a.points()) {
    point_sum.add(z.multiplicity * sigma * std::exp(-kPi * sigma * sigma * z.point * z.point));
  }
  r.point_side = point_sum.value();

  Accumulator re;
  Accumulator im;
  re.add(mu.d());
  for (const auto& at : mu.atoms()) {
    const double g = std::exp(-kPi * at.gamma * at.gamma / (sigma * sigma));
    re.add(at.b.real() * g);
    im.add(at.b.imag() * g);
  }
  r.spectral_side = complex(re.value(), im.value());
  r.residual = std::abs(r.spectral_side - r.point_side);

  // Tails: at most k1 points per unit interval beyond each window end, and
  // at most the largest observed unit mass per unit interval beyond the cutoff.
  const double k1 = a.empty() ? 1.0 : static_cast<double>(unit_count_bound(a));
  const Window w = a.window();
  const double point_scale = 1.0 / sigma;
  auto point_tail_at = [&](double reach_lo, double reach_hi) {
    return k1 * (gaussian_tail(std::max(0.0, reach_hi), point_scale, sigma) +
                 gaussian_tail(std::max(0.0, reach_lo), point_scale, sigma));
  };
  r.point_tail = point_tail_at(-w.lo, w.hi);

  const double unit_mass = std::max(max_unit_mass(mu), 1.0);
  auto spectral_tail_at = [&](double c) { return 2.0 * unit_mass * gaussian_tail(c, sigma, 1.0); };
  r.spectral_tail = spectral_tail_at(mu.cutoff());

  if (test.enforce_tails && r.point_tail > test.tail_tol) {
    double need = std::max({0.0, -w.lo, w.hi});
    while (point_tail_at(need, need) > test.tail_tol) need += 0.5;
    std::ostringstream os;
    os << "point-side tail bound " << r.point_tail << " exceeds " << test.tail_tol
       << "; the zero window must cover [-" << need << ", " << need << "]";
    throw Error(ErrorKind::insufficient_data, os.str());
  }
  if (test.enforce_tails && r.spectral_tail > test.tail_tol) {
    double need = mu.cutoff();
    while (spectral_tail_at(need) > test.tail_tol) need += 0.5;
    std::ostringstream os;
    os << "spectral-side tail bound " << r.spectral_tail << " exceeds " << test.tail_tol
       << "; atoms are needed up to |gamma| = " << need;
    throw Error(ErrorKind::insufficient_data, os.str());
  }
  return r;
}

GrowthProfile growth_profile(const PointMeasure& mu, std::vector<double> s_grid) {
  GrowthProfile gp;
  std::sort(s_grid.begin(), s_grid.end());
  std::vector<Atom> positive;
  for (const auto& at : mu.atoms()) {
    if (at.gamma > 0.0) positive.push_back(at);
  }
  Accumulator t3;
  for (const auto& at : positive) {
    if (at.gamma < 1.0) t3.add(std::abs(at.b) / at.gamma);
  }
  gp.t3_value = t3.value();

  Accumulator m;
  std::size_t k = 0;
  for (double s : s_grid) {
    while (k < positive.size() && positive[k].gamma <= s) m.add(std::abs(positive[k++].b));
    gp.m_of_s.emplace_back(s, m.value());
  }

  if (!s_grid.empty() && s_grid.back() > 0.0) {
    const double top = s_grid.back();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (const auto& [s, v] : gp.m_of_s) {
      if (s >= 0.1 * top && s > 0.0 && v > 0.0) {
        const double x = std::log(s);
        const double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
      }
    }
    const double den = n * sxx - sx * sx;
    if (n >= 2 && den > 0.0) gp.kappa_fit = (n * sxy - sx * sy) / den;
  }
  return gp;
}

double max_unit_mass(const PointMeasure& mu) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(mu.atoms().size() + 1);
  for (const auto& at : mu.atoms()) pts.emplace_back(at.gamma, std::abs(at.b));
  pts.emplace_back(0.0, mu.d());
  std::sort(pts.begin(), pts.end());
  double best = 0.0;
  double window = 0.0;
  std::size_t hi = 0;
  for (std::size_t lo = 0; lo < pts.size(); ++lo) {
    while (hi < pts.size() && pts[hi].first <= pts[lo].first + 1.0) window += pts[hi++].second;
    best = std::max(best, window);
    window -= pts[lo].second;
  }
  return best;
}

}  // namespace qclab
