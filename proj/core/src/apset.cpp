#include "qclab/apset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qclab/error.hpp"
#include "phase.hpp"

namespace qclab {

namespace {

using detail::Accumulator;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform double in [0, 1) from the top 53 bits; identical on every platform,
// unlike std::uniform_real_distribution.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

CountingConstants counting_constants(const ZeroSet& a, const CountingOptions& opts) {
  CountingConstants c;
  const Window w = a.window();
  const auto& pts = a.points();

  long k1 = 0;
  long k1_open = 0;
  if (w.length() <= 1.0) {
    k1 = k1_open = a.total_multiplicity();
  } else {
    for (const auto& z : pts) {
      if (z.point + 1.0 > w.hi) break;
      k1 = std::max(k1, a.count_closed(z.point, z.point + 1.0));
      k1_open = std::max(k1_open, a.count_half_open(z.point, z.point + 1.0));
    }
  }
  c.k1 = std::max<long>(1, k1);
  c.k1_half_open = std::max<long>(1, k1_open);

  const double usable = w.length();
  const double hmax = std::min(opts.max_h, 0.25 * usable);
  if (pts.empty() || hmax <= 0.0) return c;

  std::mt19937_64 rng(opts.seed);
  auto start_in = [&](double h) {
    // Window starts are uniform, snapped to a point, or just past a point.
    const double x = w.lo + unit(rng) * (usable - h);
    const auto mode = rng() % 3;
    if (mode == 0) return x;
    auto it = std::lower_bound(pts.begin(), pts.end(), x,
                               [](const Zero& z, double v) { return z.point < v; });
    if (it == pts.end()) return x;
    const double p = mode == 1 ? it->point : std::nextafter(it->point, w.hi);
    return p + h <= w.hi ? p : x;
  };
  long k2 = 0;
  for (long s = 0; s < opts.samples; ++s) {
    const double h = hmax * (1.0 - unit(rng));  // (0, hmax]
    const double x1 = start_in(h);
    const double x2 = start_in(h);
    k2 = std::max(k2, std::labs(a.count_half_open(x1, x1 + h) - a.count_half_open(x2, x2 + h)));
  }
  c.k2 = k2;
  c.windows_sampled = opts.samples;
  return c;
}

DensityEstimate density(const ZeroSet& a, const CountingConstants& constants) {
  if (a.empty()) throw Error(ErrorKind::empty_set, "density: empty set");
  const Window w = a.window();
  DensityEstimate est;
  est.window_length = w.length();
  est.count = a.count_closed(w.lo, w.hi);
  if (!(est.window_length > 0.0)) throw Error(ErrorKind::domain, "density: window too short");
  const double rough = static_cast<double>(a.total_multiplicity()) / est.window_length;
  if (est.window_length < 10.0 / rough) {
    std::ostringstream os;
    os << "density: window length " << est.window_length << " is shorter than 10 / d ~ "
       << 10.0 / rough;
    throw Error(ErrorKind::domain, os.str());
  }
  est.d = static_cast<double>(est.count) / est.window_length;
  est.error_bound = (2.0 * static_cast<double>(constants.k2) + 2.0 * static_cast<double>(constants.k1)) /
                    est.window_length;
  return est;
}

DensityEstimate density(const ZeroSet& a) {
  if (a.empty()) throw Error(ErrorKind::empty_set, "density: empty set");
  return density(a, counting_constants(a));
}

// ---------------------------------------------------------------------------

PhiRepresentation::PhiRepresentation(double d, long first_index, std::vector<double> phi)
    : d_(d), first_(first_index), phi_(std::move(phi)) {
  if (!(d > 0.0)) throw Error(ErrorKind::domain, "phi_representation: d must be positive");
  for (double v : phi_) sup_abs_ = std::max(sup_abs_, std::abs(v));
}

double PhiRepresentation::phi(long n) const {
  if (!covers(n)) {
    std::ostringstream os;
    os << "phi: index " << n << " outside [" << first_index() << ", " << last_index() << "]";
    throw Error(ErrorKind::domain, os.str());
  }
  return phi_[static_cast<std::size_t>(n - first_)];
}

double PhiRepresentation::point(long n) const {
  return static_cast<double>(n) / d_ + phi(n);
}

PhiRepresentation phi_representation(const ZeroSet& a, double d) {
  if (!(d > 0.0)) throw Error(ErrorKind::domain, "phi_representation: d must be positive");
  const std::vector<double> e = a.expanded();
  const long offset = std::lower_bound(e.begin(), e.end(), 0.0) - e.begin();
  std::vector<double> phi(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    const long n = static_cast<long>(k) - offset;
    const double base = static_cast<double>(n) / d;
    double p = e[k] - base;
    // Nudge by ulps until base + p rounds back to a_n exactly.
    for (int it = 0; it < 64 && base + p != e[k]; ++it) {
      p = std::nextafter(p, base + p < e[k] ? HUGE_VAL : -HUGE_VAL);
    }
    phi[k] = p;
  }
  return PhiRepresentation(d, -offset, std::move(phi));
}

std::vector<PhiCoefficient> phi_fourier(const PhiRepresentation& phi,
                                        const std::vector<double>& thetas,
                                        std::optional<long> n) {
  const long avail = std::min(-phi.first_index(), phi.last_index());
  const long big_n = n.value_or(avail);
  if (big_n < 100) {
    throw Error(ErrorKind::domain, "phi_fourier: need N >= 100 symmetric indices");
  }
  if (big_n > avail) {
    throw Error(ErrorKind::domain, "phi_fourier: N exceeds the available index range");
  }
  const double count = static_cast<double>(2 * big_n + 1);
  std::vector<PhiCoefficient> out;
  out.reserve(thetas.size());
  for (double theta : thetas) {
    complex sum{};
    for (long k = -big_n; k <= big_n; ++k) {
      double t = theta * static_cast<double>(k);
      t -= std::nearbyint(t);
      sum += phi.phi(k) * std::polar(1.0, -kTwoPi * t);
    }
    out.push_back({theta, sum / count, 2.0 * phi.sup_abs() / count});
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// 1 / slope of the least squares line through (n, a_n). Bounded phi only moves
// the slope by O(1 / N^2) here, against O(1 / N) for count over length.
double fitted_density(const std::vector<double>& e) {
  const double n = static_cast<double>(e.size());
  if (e.size() < 2) return 0.0;
  const double mean_n = 0.5 * (n - 1.0);
  double mean_a = 0.0;
  for (double v : e) mean_a += v;
  mean_a /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double dn = static_cast<double>(k) - mean_n;
    sxy += dn * (e[k] - mean_a);
    sxx += dn * dn;
  }
  return sxy > 0.0 ? sxx / sxy : 0.0;
}

}  // namespace

AlmostPeriodReport almost_periods(const ZeroSet& a, double epsilon, Window tau_range,
                                  std::optional<double> d) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::invalid_input, "almost_periods: epsilon must be positive");
  if (!(tau_range.hi >= tau_range.lo)) {
    throw Error(ErrorKind::invalid_input, "almost_periods: empty tau range");
  }
  AlmostPeriodReport rep;
  rep.epsilon = epsilon;
  rep.search_range = tau_range;
  rep.edge_band = std::max(1.0, tau_range.hi);
  if (a.empty()) {
    rep.d = d.value_or(0.0);
    return rep;
  }

  const std::vector<double> e = a.expanded();
  rep.d = d.value_or(fitted_density(e));
  const Window w = a.window();
  const double lo = w.lo + rep.edge_band;
  const double hi = w.hi - rep.edge_band;
  const long n_total = static_cast<long>(e.size());

  const long h_lo = std::max<long>(1, static_cast<long>(std::floor(tau_range.lo * rep.d)) - 2);
  const long h_hi = static_cast<long>(std::ceil(tau_range.hi * rep.d)) + 2;
  const long first = std::lower_bound(e.begin(), e.end(), lo) - e.begin();

  std::vector<double> diffs;
  for (long h = h_lo; h <= h_hi && h < n_total; ++h) {
    diffs.clear();
    for (long k = first; k + h < n_total && e[static_cast<std::size_t>(k + h)] <= hi; ++k) {
      diffs.push_back(e[static_cast<std::size_t>(k + h)] - e[static_cast<std::size_t>(k)]);
    }
    if (diffs.empty()) continue;
    ++rep.shifts_scanned;
    std::vector<double> sorted = diffs;
    const std::size_t mid = sorted.size() / 2;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
    double tau = sorted[mid];
    if (sorted.size() % 2 == 0) {
      const double lower = *std::max_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid));
      tau = 0.5 * (tau + lower);
    }
    if (tau < tau_range.lo || tau > tau_range.hi) continue;
    double dev = 0.0;
    for (double v : diffs) dev = std::max(dev, std::abs(v - tau));
    if (dev < epsilon) rep.periods.push_back({tau, h, dev});
  }
  std::sort(rep.periods.begin(), rep.periods.end(),
            [](const AlmostPeriod& x, const AlmostPeriod& y) { return x.tau < y.tau; });
  if (rep.periods.size() < 2) {
    rep.max_gap = tau_range.length();
  } else {
    for (std::size_t k = 1; k < rep.periods.size(); ++k) {
      rep.max_gap = std::max(rep.max_gap, rep.periods[k].tau - rep.periods[k - 1].tau);
    }
  }
  return rep;
}

Translation translate_off_origin(const ZeroSet& a) {
  const auto& pts = a.points();
  auto it = std::lower_bound(pts.begin(), pts.end(), 0.0,
                             [](const Zero& z, double v) { return z.point < v; });
  if (it == pts.end() || it->point != 0.0) return {a, 0.0};
  double gap = a.window().length();
  if (it != pts.begin()) gap = std::min(gap, -std::prev(it)->point);
  if (std::next(it) != pts.end()) gap = std::min(gap, std::next(it)->point);
  const double delta = 0.5 * gap;
  return {a.translated(delta), delta};
}

LindelofReport lindelof_sum(const ZeroSet& a, std::vector<double> radii) {
  const auto& pts = a.points();
  for (const auto& z : pts) {
    if (z.point == 0.0) {
      throw Error(ErrorKind::domain,
                  "lindelof_sum: 0 is a point of the set; translate it first (translate_off_origin)");
    }
  }
  std::sort(radii.begin(), radii.end());
  const double reach = std::min(-a.window().lo, a.window().hi);
  for (double r : radii) {
    if (!(r > 0.0) || r > reach) {
      std::ostringstream os;
      os << "lindelof_sum: radius " << r << " not inside the window (max " << reach << ")";
      throw Error(ErrorKind::domain, os.str());
    }
  }
  std::vector<Zero> by_abs(pts.begin(), pts.end());
  std::sort(by_abs.begin(), by_abs.end(), [](const Zero& x, const Zero& y) {
    return std::abs(x.point) < std::abs(y.point) ||
           (std::abs(x.point) == std::abs(y.point) && x.point < y.point);
  });
  LindelofReport rep;
  rep.radii = radii;
  Accumulator acc;
  std::size_t k = 0;
  for (double r : radii) {
    while (k < by_abs.size() && std::abs(by_abs[k].point) < r) {
      acc.add(by_abs[k].multiplicity / by_abs[k].point);
      ++k;
    }
    rep.sums.push_back(acc.value());
  }
  if (!rep.sums.empty()) {
    const std::size_t half = rep.sums.size() / 2;
    const auto [mn, mx] = std::minmax_element(rep.sums.begin() + static_cast<std::ptrdiff_t>(half), rep.sums.end());
    rep.cauchy_stat = *mx - *mn;
  }
  return rep;
}

KreinLevinReport krein_levin_diagnostic(const PhiRepresentation& phi,
                                        const std::vector<long>& taus, long n) {
  if (n < 1) throw Error(ErrorKind::invalid_input, "krein_levin_diagnostic: N must be positive");
  if (taus.empty()) throw Error(ErrorKind::invalid_input, "krein_levin_diagnostic: empty tau list");
  const auto [tmin, tmax] = std::minmax_element(taus.begin(), taus.end());
  const long need_lo = -n + std::min<long>(0, *tmin);
  const long need_hi = n + std::max<long>(0, *tmax);
  if (!phi.covers(need_lo) || !phi.covers(need_hi)) {
    std::ostringstream os;
    os << "krein_levin_diagnostic: phi covers [" << phi.first_index() << ", " << phi.last_index()
       << "], need [" << need_lo << ", " << need_hi << "]";
    throw Error(ErrorKind::domain, os.str());
  }
  KreinLevinReport rep;
  rep.n = n;
  rep.taus = taus;
  rep.sup = -HUGE_VAL;
  for (long tau : taus) {
    Accumulator acc;
    for (long k = 1; k <= n; ++k) {
      acc.add((phi.phi(k + tau) - phi.phi(k)) / static_cast<double>(k));
      acc.add(-(phi.phi(-k + tau) - phi.phi(-k)) / static_cast<double>(k));
    }
    const double v = acc.value();
    rep.sums.push_back(v);
    rep.sup = std::max(rep.sup, v);
    rep.sup_abs = std::max(rep.sup_abs, std::abs(v));
  }
  return rep;
}

}  // namespace qclab
