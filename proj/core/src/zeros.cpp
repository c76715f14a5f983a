#include "qclab/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qclab/error.hpp"

namespace qclab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

// ---------------------------------------------------------------------------
// ZeroSet

ZeroSet::ZeroSet(Window window, std::vector<Zero> points) : window_(window) {
  if (!(std::isfinite(window.lo) && std::isfinite(window.hi)) || window.hi < window.lo) {
    throw Error(ErrorKind::invalid_input, "ZeroSet: window must be a finite interval");
  }
  std::sort(points.begin(), points.end(),
            [](const Zero& a, const Zero& b) { return a.point < b.point; });
  for (const auto& z : points) {
    if (!std::isfinite(z.point)) throw Error(ErrorKind::invalid_input, "ZeroSet: non-finite point");
    if (z.multiplicity <= 0) {
      throw Error(ErrorKind::invalid_input, "ZeroSet: multiplicity must be positive");
    }
    if (!window.contains(z.point)) {
      std::ostringstream os;
      os << "ZeroSet: point " << z.point << " outside window [" << window.lo << ", "
         << window.hi << "]";
      throw Error(ErrorKind::invalid_input, os.str());
    }
    if (!points_.empty() && points_.back().point == z.point) {
      points_.back().multiplicity += z.multiplicity;
    } else {
      points_.push_back(z);
    }
  }
  cumulative_.resize(points_.size() + 1, 0);
  for (std::size_t k = 0; k < points_.size(); ++k) {
    cumulative_[k + 1] = cumulative_[k] + points_[k].multiplicity;
  }
}

long ZeroSet::total_multiplicity() const noexcept {
  return cumulative_.empty() ? 0 : cumulative_.back();
}

std::vector<double> ZeroSet::expanded() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(total_multiplicity()));
  for (const auto& z : points_) out.insert(out.end(), static_cast<std::size_t>(z.multiplicity), z.point);
  return out;
}

long ZeroSet::count_half_open(double a, double b) const {
  if (points_.empty() || b <= a) return 0;
  auto cmp = [](const Zero& z, double v) { return z.point < v; };
  const auto lo = std::lower_bound(points_.begin(), points_.end(), a, cmp) - points_.begin();
  const auto hi = std::lower_bound(points_.begin(), points_.end(), b, cmp) - points_.begin();
  return cumulative_[static_cast<std::size_t>(hi)] - cumulative_[static_cast<std::size_t>(lo)];
}

long ZeroSet::count_closed(double a, double b) const {
  if (points_.empty() || b < a) return 0;
  auto lower = [](const Zero& z, double v) { return z.point < v; };
  auto upper = [](double v, const Zero& z) { return v < z.point; };
  const auto lo = std::lower_bound(points_.begin(), points_.end(), a, lower) - points_.begin();
  const auto hi = std::upper_bound(points_.begin(), points_.end(), b, upper) - points_.begin();
  return cumulative_[static_cast<std::size_t>(hi)] - cumulative_[static_cast<std::size_t>(lo)];
}

ZeroSet ZeroSet::translated(double delta) const {
  std::vector<Zero> pts = points_;
  for (auto& z : pts) z.point += delta;
  return ZeroSet({window_.lo + delta, window_.hi + delta}, std::move(pts));
}

// ---------------------------------------------------------------------------
// Argument principle

long count_zeros_rectangle(const ExpSum& f, const Rect& rect, const ZeroOptions& opts) {
  if (f.empty()) throw Error(ErrorKind::domain, "count_zeros_rectangle: f is identically zero");
  if (!(rect.x1 > rect.x0 && rect.y1 > rect.y0)) {
    throw Error(ErrorKind::invalid_input, "count_zeros_rectangle: degenerate rectangle");
  }
  const double norm = f.wiener_norm();
  const double margin = opts.edge_margin * norm;

  // sup |f'| over the closed rectangle.
  double dbound = 0.0;
  for (const auto& t : f.terms()) {
    const double e = std::max(-kTwoPi * t.omega * rect.y0, -kTwoPi * t.omega * rect.y1);
    dbound += kTwoPi * std::abs(t.omega) * std::abs(t.q) * std::exp(e);
  }
  if (dbound == 0.0) return 0;  // constant

  const complex corners[5] = {{rect.x0, rect.y0}, {rect.x1, rect.y0}, {rect.x1, rect.y1},
                              {rect.x0, rect.y1}, {rect.x0, rect.y0}};
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const complex a = corners[e];
    const complex b = corners[e + 1];
    const double len = std::abs(b - a);
    const complex dir = (b - a) / len;
    double t = 0.0;
    complex fa = evaluate(f, a);
    while (t < len) {
      const double mag = std::abs(fa);
      if (!(mag > margin)) {
        std::ostringstream os;
        os << "count_zeros_rectangle: |f| = " << mag << " on the contour near "
           << (a + dir * t) << " (edge margin " << margin << ")";
        throw Error(ErrorKind::contour_too_close, os.str());
      }
      double step = 0.5 * mag / dbound;
      const bool last = t + step >= len;
      const double t2 = last ? len : t + step;
      const complex z2 = last ? b : a + dir * t2;
      const complex f2 = evaluate(f, z2);
      total += std::arg(f2 / fa);
      fa = f2;
      t = t2;
    }
  }
  const double winding = total / kTwoPi;
  const double rounded = std::nearbyint(winding);
  if (std::abs(winding - rounded) > 0.25) {
    throw Error(ErrorKind::convergence, "count_zeros_rectangle: winding number not near an integer");
  }
  return static_cast<long>(rounded);
}

// ---------------------------------------------------------------------------
// Real zero search

namespace {

// Real-valued restriction of a (rotated) exponential sum and its derivatives.
class RealLine {
 public:
  RealLine(const ExpSum& f, complex rotation, const AlgebraOptions& alg)
      : rotation_(rotation), alg_(alg) {
    derivs_.push_back(f);
  }

  const ExpSum& deriv(int k) {
    while (static_cast<int>(derivs_.size()) <= k) derivs_.push_back(derivative(derivs_.back(), alg_));
    return derivs_[static_cast<std::size_t>(k)];
  }

  double value(int k, double x) { return (rotation_ * evaluate(deriv(k), x)).real(); }

 private:
  complex rotation_;
  AlgebraOptions alg_;
  std::vector<ExpSum> derivs_;
};

// Safeguarded Newton on h = value(order, .) inside a sign-change bracket.
double bracketed_root(RealLine& line, int order, double a, double b, double ha,
                      const ZeroOptions& opts) {
  double lo = a;
  double hi = b;
  if (ha > 0) std::swap(lo, hi);  // h(lo) < 0 < h(hi)
  double x = 0.5 * (a + b);
  double dx_old = std::abs(b - a);
  double dx = dx_old;
  double h = line.value(order, x);
  double dh = line.value(order + 1, x);
  for (int it = 0; it < 200; ++it) {
    const bool newton_leaves = ((x - hi) * dh - h) * ((x - lo) * dh - h) > 0.0;
    const bool too_slow = std::abs(2.0 * h) > std::abs(dx_old * dh);
    if (newton_leaves || too_slow) {
      dx_old = dx;
      dx = 0.5 * (hi - lo);
      x = lo + dx;
    } else {
      dx_old = dx;
      dx = h / dh;
      x -= dx;
    }
    if (std::abs(dx) < 0.25 * opts.newton_tol) break;
    h = line.value(order, x);
    if (h == 0.0) break;
    dh = line.value(order + 1, x);
    if (h < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
  }
  return x;
}

// Plain Newton polish on value(order, .), kept inside [a, b].
double polish(RealLine& line, int order, double x, double a, double b, const ZeroOptions& opts) {
  for (int it = 0; it < opts.newton_iterations; ++it) {
    const double h = line.value(order, x);
    const double dh = line.value(order + 1, x);
    if (dh == 0.0 || !std::isfinite(h / dh)) break;
    const double next = std::clamp(x - h / dh, a, b);
    const double dx = next - x;
    x = next;
    if (std::abs(dx) < opts.newton_tol) break;
  }
  return x;
}

struct Scanner {
  const ExpSum& f;  // centered
  RealLine& line;
  const ZeroOptions& opts;
  double norm;

  bool accept(double x) const {
    return std::abs(evaluate(f, x)) < opts.resid_tol * norm;
  }

  // Candidate real zeros in [a, b] from sign changes and from small local
  // minima of |g| that do not change sign.
  std::vector<double> scan(double a, double b, double step) const {
    const auto n = static_cast<std::size_t>(std::ceil((b - a) / step));
    std::vector<double> xs(n + 1);
    std::vector<double> gs(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      xs[k] = (k == n) ? b : a + static_cast<double>(k) * step;
      gs[k] = line.value(0, xs[k]);
    }
    std::vector<double> out;
    for (std::size_t k = 0; k <= n; ++k) {
      if (gs[k] == 0.0) {
        if (accept(xs[k])) out.push_back(xs[k]);
        continue;
      }
      if (k < n && gs[k + 1] != 0.0 && (gs[k] < 0.0) != (gs[k + 1] < 0.0)) {
        const double r = bracketed_root(line, 0, xs[k], xs[k + 1], gs[k], opts);
        if (accept(r)) out.push_back(r);
      }
      if (k > 0 && k < n) {
        const double m = std::abs(gs[k]);
        const bool same_sign = (gs[k - 1] < 0.0) == (gs[k] < 0.0) &&
                               (gs[k + 1] < 0.0) == (gs[k] < 0.0) && gs[k - 1] != 0.0 &&
                               gs[k + 1] != 0.0;
        if (same_sign && m <= std::abs(gs[k - 1]) && m <= std::abs(gs[k + 1])) {
          const double da = line.value(1, xs[k - 1]);
          const double db = line.value(1, xs[k + 1]);
          if (da != 0.0 && db != 0.0 && (da < 0.0) != (db < 0.0)) {
            const double r = bracketed_root(line, 1, xs[k - 1], xs[k + 1], da, opts);
            if (accept(r)) out.push_back(r);
          }
        }
      }
    }
    std::sort(out.begin(), out.end());
    std::vector<double> uniq;
    for (double r : out) {
      if (uniq.empty() || r - uniq.back() > 1e-8 * std::max(1.0, std::abs(r))) uniq.push_back(r);
    }
    return uniq;
  }

  // Multiplicity from a box around the candidate, shrinking the box if a
  // zero sits on its boundary. Returns 0 for spurious candidates.
  long multiplicity(double x, double half_width) const {
    double w = half_width;
    const double bmax = f.max_abs_frequency();
    for (int attempt = 0; attempt < 8; ++attempt, w *= 0.7) {
      // Two zeros closer than the box leave |f| ~ (2 pi B w)^2 on its edge.
      ZeroOptions local = opts;
      const double scale = std::min(1.0, kTwoPi * bmax * w);
      local.edge_margin = opts.edge_margin * scale * scale;
      try {
        return count_zeros_rectangle(f, {x - w, x + w, -w, w}, local);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::contour_too_close) throw;
      }
    }
    std::ostringstream os;
    os << "find_real_zeros: no clean box around candidate zero " << x << " (half-width "
       << half_width << ")";
    throw Error(ErrorKind::contour_too_close, os.str());
  }

  // Resolves multiplicities and polishes multiple roots on the matching
  // derivative, where they become simple.
  std::vector<Zero> resolve(const std::vector<double>& cands, double step) const {
    std::vector<Zero> out;
    for (std::size_t k = 0; k < cands.size(); ++k) {
      double w = step;
      if (k > 0) w = std::min(w, 0.45 * (cands[k] - cands[k - 1]));
      if (k + 1 < cands.size()) w = std::min(w, 0.45 * (cands[k + 1] - cands[k]));
      const long m = multiplicity(cands[k], w);
      if (m <= 0) continue;
      double x = cands[k];
      if (m > 1) {
        const double p = polish(line, static_cast<int>(m - 1), x, x - w, x + w, opts);
        if (accept(p)) x = p;
      }
      out.push_back({x, static_cast<int>(m)});
    }
    return out;
  }

  // Block boundary near x: the sample within a few steps maximizing |f|.
  double clean_point(double x, double step) const {
    double best = x;
    double best_mag = -1.0;
    for (int k = -4; k <= 4; ++k) {
      const double y = x + 0.25 * k * step;
      const double mag = std::abs(evaluate(f, y));
      if (mag > best_mag) {
        best_mag = mag;
        best = y;
      }
    }
    return best;
  }
};

long multiplicity_in(const std::vector<Zero>& zs, double a, double b) {
  long s = 0;
  for (const auto& z : zs) {
    if (z.point > a && z.point < b) s += z.multiplicity;
  }
  return s;
}

}  // namespace

double zero_strip_height(const ExpSum& f) {
  if (f.size() < 2) return 0.0;
  return std::max(auto_height(f).height, auto_height(reflect(f)).height);
}

Window safe_window(const ExpSum& f, Window window) {
  if (f.size() < 2) return window;
  const ExpSum fc = centered(f);
  const double step = 1.0 / (16.0 * fc.max_abs_frequency());
  auto best = [&](double x) {
    double arg = x;
    double mag = -1.0;
    for (int k = -8; k <= 8; ++k) {
      const double y = x + 0.25 * k * step;
      const double m = std::abs(evaluate(fc, y));
      if (m > mag) {
        mag = m;
        arg = y;
      }
    }
    return arg;
  };
  return {best(window.lo), best(window.hi)};
}

ZeroSearch search_real_zeros(const ExpSum& f, Window window, const ZeroOptions& opts) {
  if (!(std::isfinite(window.lo) && std::isfinite(window.hi)) || !(window.hi > window.lo)) {
    throw Error(ErrorKind::invalid_input, "find_real_zeros: window must be a finite interval");
  }
  ZeroSearch res;
  if (f.size() < 2) {
    if (f.empty()) throw Error(ErrorKind::domain, "find_real_zeros: f is identically zero");
    res.single_exponential = true;
    res.zeros = ZeroSet(window, {});
    return res;
  }

  const ExpSum fc = centered(f, opts.algebra);
  const double bmax = fc.max_abs_frequency();
  const double step = opts.scan_step.value_or(1.0 / (16.0 * bmax));
  res.scan_step = step;
  res.strip_height = step;

  // On the real line fc = e^{i theta} * (real function) when the zero set is
  // real; theta comes from the extreme coefficients.
  const auto terms = fc.terms();
  const double theta = 0.5 * (std::arg(terms.front().q) + std::arg(terms.back().q));
  RealLine line(fc, std::polar(1.0, -theta), opts.algebra);
  const Scanner scanner{fc, line, opts, fc.wiener_norm()};

  const double lo = window.lo - 2.0 * step;
  const double hi = window.hi + 2.0 * step;
  std::vector<Zero> found = scanner.resolve(scanner.scan(lo, hi, step), step);

  // Completeness: compare per-block contour counts with the multiplicities
  // found and rescan the blocks that disagree with a finer step.
  const double block_len = 64.0 * step;
  std::vector<double> edges{lo};
  for (double x = lo + block_len; x < hi - 0.5 * block_len; x += block_len) {
    edges.push_back(scanner.clean_point(x, step));
  }
  edges.push_back(hi);
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    const double a0 = edges[b];
    const double a1 = edges[b + 1];
    double fine = step;
    for (int depth = 0; depth < opts.refine_depth; ++depth) {
      long expected;
      try {
        expected = count_zeros_rectangle(fc, {a0, a1, -step, step}, opts);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::contour_too_close) throw;
        break;  // a zero sits on the block edge; the boundary pass reports it
      }
      if (multiplicity_in(found, a0, a1) >= expected) break;
      fine /= 8.0;
      std::vector<Zero> redo = scanner.resolve(scanner.scan(a0, a1, fine), fine);
      std::erase_if(found, [&](const Zero& z) { return z.point > a0 && z.point < a1; });
      for (const auto& z : redo) {
        if (z.point > a0 && z.point < a1) found.push_back(z);
      }
      std::sort(found.begin(), found.end(),
                [](const Zero& x, const Zero& y) { return x.point < y.point; });
    }
  }

  std::vector<Zero> inside;
  for (const auto& z : found) {
    if (std::abs(z.point - window.lo) < opts.boundary_tol ||
        std::abs(z.point - window.hi) < opts.boundary_tol) {
      std::ostringstream os;
      os << "find_real_zeros: zero at " << z.point << " lies on the window boundary; shift the window";
      throw Error(ErrorKind::boundary, os.str());
    }
    if (window.contains(z.point)) {
      inside.push_back(z);
      res.max_residual =
          std::max(res.max_residual, std::abs(evaluate(fc, z.point)) / fc.wiener_norm());
    }
  }
  res.zeros = ZeroSet(window, std::move(inside));

  try {
    res.strip_count =
        count_zeros_rectangle(fc, {window.lo, window.hi, -step, step}, opts);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::contour_too_close) throw;
    throw Error(ErrorKind::boundary,
                std::string("find_real_zeros: window edge too close to a zero: ") + e.what());
  }
  return res;
}

ZeroSet find_real_zeros(const ExpSum& f, Window window, const ZeroOptions& opts) {
  return search_real_zeros(f, window, opts).zeros;
}

RealnessReport realness_check(const ExpSum& f, Window window, double strip_height,
                              const ZeroOptions& opts) {
  if (!(strip_height > 0.0)) {
    throw Error(ErrorKind::invalid_input, "realness_check: strip height must be positive");
  }
  RealnessReport rep;
  const ZeroSearch search = search_real_zeros(f, window, opts);
  rep.real_count = search.zeros.total_multiplicity();
  if (search.single_exponential) {
    rep.total_count = 0;
  } else {
    rep.total_count =
        count_zeros_rectangle(f, {window.lo, window.hi, -strip_height, strip_height}, opts);
  }
  rep.all_real = rep.real_count == rep.total_count;
  return rep;
}

}  // namespace qclab
