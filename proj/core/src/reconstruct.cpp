#include "qclab/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qclab/apset.hpp"
#include "qclab/error.hpp"
#include "phase.hpp"

namespace qclab {

namespace {

using detail::Accumulator;
using detail::kTwoPi;
constexpr double kPi = std::numbers::pi;
constexpr double kZeroTol = 1e-12;

ProductValue product_off_origin(const ZeroSet& a, complex z) {
  ProductValue out;
  for (const auto& p : a.points()) {
    if (std::abs(z - p.point) < kZeroTol) {
      out.zero_multiplicity = p.multiplicity;
      out.log_value = complex(-std::numeric_limits<double>::infinity(), 0.0);
      return out;
    }
  }
  const std::vector<double> pts = a.expanded();
  if (pts.empty()) {
    out.value = 1.0;
    return out;
  }
  const auto first_nonneg = std::lower_bound(pts.begin(), pts.end(), 0.0);
  const long zero_index = first_nonneg - pts.begin();
  const long right = static_cast<long>(pts.size()) - zero_index - 1;  // a_1..a_right
  const long left = zero_index;                                       // a_-1..a_-left

  auto factor_log = [&](double a_n) { return std::log(1.0 - z / a_n); };

  Accumulator re;
  Accumulator im;
  auto add = [&](complex v) {
    re.add(v.real());
    im.add(v.imag());
  };
  long n_pairs = 0;
  if (right >= 0) {
    add(factor_log(pts[static_cast<std::size_t>(zero_index)]));
    n_pairs = std::min(right, left);
    for (long n = 1; n <= n_pairs; ++n) {
      add(factor_log(pts[static_cast<std::size_t>(zero_index + n)]));
      add(factor_log(pts[static_cast<std::size_t>(zero_index - n)]));
    }
  } else {
    // every point is negative: no a_0 and no pairs
    for (double p : pts) add(factor_log(p));
  }
  out.pairs = n_pairs;

  // Pairs beyond N: log((1 - z/a_n)(1 - z/a_-n)) ~ (2 c z - z^2) d^2 / n^2
  // with a_n + a_-n ~ 2c, summed as (2 c z - z^2) d^2 / (N + 1/2).
  if (n_pairs >= 4) {
    auto at = [&](long n) { return pts[static_cast<std::size_t>(zero_index + n)]; };
    const double n_real = static_cast<double>(n_pairs);
    const double d_hat = 2.0 * n_real / (at(n_pairs) - at(-n_pairs));
    Accumulator mean;
    long count = 0;
    for (long n = n_pairs / 2 + 1; n <= n_pairs; ++n, ++count) mean.add(0.5 * (at(n) + at(-n)));
    const double c = mean.value() / static_cast<double>(count);
    double dev = 0.0;
    for (long n = n_pairs / 2 + 1; n <= n_pairs; ++n) {
      dev = std::max(dev, std::abs(0.5 * (at(n) + at(-n)) - c));
    }
    const double s2 = 1.0 / (n_real + 0.5);
    out.tail_log = (2.0 * c * z - z * z) * d_hat * d_hat * s2;
    add(out.tail_log);
    const double az = std::abs(z);
    out.error_estimate = 2.0 * az * d_hat * d_hat * dev * s2 +
                         std::pow(az * d_hat, 3) * 0.5 / (n_real * n_real) +
                         std::abs(out.tail_log) * s2;
  }
  out.log_value = complex(re.value(), im.value());
  out.value = std::exp(out.log_value);
  return out;
}

double mean_slope(const std::vector<std::pair<double, double>>& xy) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const auto& [x, y] : xy) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || den <= 0.0) return 0.0;
  return (n * sxy - sx * sy) / den;
}

TypeEstimate type_from_samples(std::vector<std::pair<double, double>> samples) {
  TypeEstimate t;
  t.samples = std::move(samples);
  const std::size_t n = t.samples.size();
  const auto& [y2, l2] = t.samples.back();
  t.raw = l2 / y2;
  if (n >= 2) {
    const auto& [y1, l1] = t.samples[n - 2];
    t.estimate = (l2 - l1) / (y2 - y1);
  } else {
    t.estimate = t.raw;
  }
  return t;
}

std::vector<double> checked_y_grid(std::vector<double> y_grid) {
  std::sort(y_grid.begin(), y_grid.end());
  y_grid.erase(std::unique(y_grid.begin(), y_grid.end()), y_grid.end());
  if (y_grid.empty() || !(y_grid.front() > 0.0) || !std::isfinite(y_grid.back())) {
    throw Error(ErrorKind::invalid_input, "exponential type needs positive finite y values");
  }
  return y_grid;
}

}  // namespace

ProductValue canonical_product(const ZeroSet& a, complex z) {
  const Translation tr = translate_off_origin(a);
  if (tr.delta == 0.0) return product_off_origin(a, z);
  ProductValue out = product_off_origin(tr.set, z + tr.delta);
  out.translation = tr.delta;
  return out;
}

LogSeries log_series_at_height_one(const PointMeasure& mu, double d, const LogSeriesOptions& opts) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw Error(ErrorKind::domain, "density d must be positive to rebuild a generating function");
  }
  LogSeries out;
  std::vector<Term> terms;
  Accumulator t3;
  for (const auto& at : mu.atoms()) {
    if (at.gamma <= 0.0) continue;
    if (at.gamma < 1.0) t3.add(std::abs(at.b) / at.gamma);
    terms.push_back({at.gamma, -(at.b / at.gamma) * std::exp(-kTwoPi * at.gamma)});
  }
  out.t3_value = t3.value();
  out.over_budget = out.t3_value > opts.t3_budget;
  if (out.over_budget && opts.strict) {
    std::ostringstream os;
    os << "sum over 0 < gamma < 1 of |b|/gamma is " << out.t3_value << ", over the budget "
       << opts.t3_budget;
    throw Error(ErrorKind::domain, os.str());
  }
  out.series = canonicalize(std::move(terms), opts.algebra);
  out.norm = out.series.wiener_norm();

  const double c = std::max(mu.cutoff(), 1.0);
  double tail = 0.0;
  for (int j = 0; j < 200; ++j) tail += std::exp(-kTwoPi * (c + j)) / (c + j);
  out.tail_bound = max_unit_mass(mu) * tail;
  return out;
}

Rebuilt rebuild_dirichlet(const PointMeasure& mu, double d, const LogSeriesOptions& opts) {
  Rebuilt out;
  out.log_series = log_series_at_height_one(mu, d, opts);
  out.degenerate = mu.atoms().empty();
  out.height_one = exp_series(out.log_series.series, opts.algebra);

  std::vector<Term> mapped;
  mapped.reserve(out.height_one.size());
  Accumulator re;
  Accumulator im;
  const double top = d + opts.algebra.freq_tol;
  for (const auto& t : out.height_one.terms()) {
    // The spectrum of F lies in [0, d]; anything above is cancellation residue
    // that the coefficient map would amplify by e^{2 pi omega}.
    if (t.omega > top) {
      out.beyond_width_mass += std::abs(t.q);
      continue;
    }
    const double exponent = kTwoPi * t.omega - kPi * d;
    if (exponent > 700.0) {
      throw Error(ErrorKind::overflow, "coefficient map exp(2 pi omega - pi d) overflows");
    }
    const complex q = t.q * std::exp(exponent);
    mapped.push_back({t.omega - 0.5 * d, q});
    re.add(q.real());
    im.add(q.imag());
  }
  out.normalization = complex(re.value(), im.value());
  if (std::abs(out.normalization) == 0.0) {
    throw Error(ErrorKind::domain, "rebuilt sum vanishes at 0 and cannot be normalized");
  }
  for (auto& t : mapped) t.q /= out.normalization;
  out.sum = canonicalize(std::move(mapped), opts.algebra);

  if (!out.sum.empty()) {
    out.spectrum_width = out.sum.max_frequency() - out.sum.min_frequency();
    const double tol = 1e-6 * std::max(1.0, d);
    out.extremes_attained = !out.degenerate &&
                            std::abs(out.sum.min_frequency() + 0.5 * d) < tol &&
                            std::abs(out.sum.max_frequency() - 0.5 * d) < tol;
  }
  return out;
}

Rebuilt rebuild_dirichlet(const PointMeasure& mu, const LogSeriesOptions& opts) {
  return rebuild_dirichlet(mu, mu.d(), opts);
}

complex g_function(const PointMeasure& mu, complex z) {
  Accumulator re;
  Accumulator im;
  for (const auto& at : mu.atoms()) {
    if (at.gamma <= 0.0 || at.gamma >= 1.0) continue;
    const complex w = at.b * detail::expm1(complex(0.0, kTwoPi * at.gamma) * z) / at.gamma;
    re.add(w.real());
    im.add(w.imag());
  }
  return {re.value(), im.value()};
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::bounded:
      return "bounded";
    case Verdict::growing:
      return "growing";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

GReport g_boundedness(const PointMeasure& mu, std::vector<double> x_grid, const GOptions& opts) {
  std::sort(x_grid.begin(), x_grid.end());
  x_grid.erase(std::unique(x_grid.begin(), x_grid.end()), x_grid.end());
  if (x_grid.empty() || !(x_grid.front() > 0.0) || !std::isfinite(x_grid.back())) {
    throw Error(ErrorKind::invalid_input, "g_boundedness needs positive finite window half-widths");
  }
  GReport rep;
  double gamma_max = 0.0;
  for (const auto& at : mu.atoms()) {
    if (at.gamma > 0.0 && at.gamma < 1.0) gamma_max = std::max(gamma_max, at.gamma);
  }
  const double x_max = x_grid.back();
  if (gamma_max == 0.0) {
    for (double x : x_grid) rep.windows.emplace_back(x, 0.0);
    return rep;
  }
  const double step = std::min(1.0 / (20.0 * gamma_max), x_grid.front() / 4.0);
  rep.sample_step = step;
  const auto n = static_cast<long>(std::ceil(x_max / step));

  auto mag = [&](double x) { return std::abs(g_function(mu, x)); };
  auto refine = [&](double lo, double hi) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = mag(x1), f2 = mag(x2);
    for (int it = 0; it < 100 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
      if (f1 < f2) {
        lo = x1; x1 = x2; f1 = f2; x2 = lo + r * (hi - lo); f2 = mag(x2);
      } else {
        hi = x2; x2 = x1; f2 = f1; x1 = hi - r * (hi - lo); f1 = mag(x1);
      }
    }
    return std::max(f1, f2);
  };

  // Samples at k*step for k in [-n, n]; local maxima are refined.
  std::vector<double> values(static_cast<std::size_t>(2 * n + 1));
  for (long k = -n; k <= n; ++k) values[static_cast<std::size_t>(k + n)] = mag(step * k);
  std::vector<std::pair<double, double>> peaks;  // (|x|, sup near x)
  for (long k = -n; k <= n; ++k) {
    const auto i = static_cast<std::size_t>(k + n);
    double v = values[i];
    const bool left_ok = k == -n || values[i - 1] <= v;
    const bool right_ok = k == n || values[i + 1] <= v;
    if (left_ok && right_ok && k != -n && k != n) {
      const double lo = std::max(-x_max, step * (k - 1));
      const double hi = std::min(x_max, step * (k + 1));
      v = std::max(v, refine(lo, hi));
    }
    peaks.emplace_back(std::abs(step * k), v);
  }
  std::sort(peaks.begin(), peaks.end());
  double sup = 0.0;
  std::size_t j = 0;
  for (double x : x_grid) {
    while (j < peaks.size() && peaks[j].first <= x + 0.5 * step) sup = std::max(sup, peaks[j++].second);
    rep.windows.emplace_back(x, sup);
  }

  std::vector<std::pair<double, double>> logs;
  for (const auto& [x, s] : rep.windows) {
    if (s > 1e-14) logs.emplace_back(std::log(x), std::log(s));
  }
  rep.slope_fit = mean_slope(logs);
  if (rep.slope_fit < opts.bounded_margin) {
    rep.bounded_verdict = Verdict::bounded;
  } else if (rep.slope_fit > opts.growing_margin) {
    rep.bounded_verdict = Verdict::growing;
  } else {
    rep.bounded_verdict = Verdict::inconclusive;
  }
  return rep;
}

TypeEstimate exponential_type(const ExpSum& f, std::vector<double> y_grid) {
  if (f.empty()) throw Error(ErrorKind::domain, "exponential type of the zero function");
  std::vector<std::pair<double, double>> samples;
  for (double y : checked_y_grid(std::move(y_grid))) {
    const double l = log_abs(f, complex(0.0, y));
    if (!std::isfinite(l)) throw Error(ErrorKind::convergence, "f vanishes on the imaginary axis sample");
    samples.emplace_back(y, l);
  }
  return type_from_samples(std::move(samples));
}

TypeEstimate exponential_type(const ZeroSet& a, std::vector<double> y_grid) {
  std::vector<std::pair<double, double>> samples;
  for (double y : checked_y_grid(std::move(y_grid))) {
    const ProductValue p = canonical_product(a, complex(0.0, y));
    const double l = p.log_value.real();
    if (!std::isfinite(l)) throw Error(ErrorKind::convergence, "product vanishes on the imaginary axis sample");
    samples.emplace_back(y, l);
  }
  return type_from_samples(std::move(samples));
}

}  // namespace qclab
