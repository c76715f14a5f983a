#include "qclab/wiener.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qclab/error.hpp"
#include "phase.hpp"

namespace qclab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// exp() overflows past this argument.
constexpr double kMaxExponent = 709.0;

bool term_less(const Term& a, const Term& b) {
  if (a.omega != b.omega) return a.omega < b.omega;
  if (a.q.real() != b.q.real()) return a.q.real() < b.q.real();
  return a.q.imag() < b.q.imag();
}

using detail::cis_cycles;
using detail::product_cycles;

void check_capacity(std::size_t n, const AlgebraOptions& opts, const char* what) {
  if (n > opts.max_terms) {
    std::ostringstream os;
    os << what << ": " << n << " terms exceed max_terms=" << opts.max_terms
       << " (raise prune_tol or max_terms)";
    throw Error(ErrorKind::capacity, os.str());
  }
}

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::no_zeros: return "no_zeros";
    case ErrorKind::boundary: return "boundary";
    case ErrorKind::contour_too_close: return "contour_too_close";
    case ErrorKind::domain: return "domain";
    case ErrorKind::empty_set: return "empty_set";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

double ExpSum::wiener_norm() const noexcept {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.q);
  return s;
}

double ExpSum::min_frequency() const {
  if (terms_.empty()) throw Error(ErrorKind::domain, "min_frequency of an empty sum");
  return terms_.front().omega;
}

double ExpSum::max_frequency() const {
  if (terms_.empty()) throw Error(ErrorKind::domain, "max_frequency of an empty sum");
  return terms_.back().omega;
}

double ExpSum::max_abs_frequency() const noexcept {
  if (terms_.empty()) return 0.0;
  return std::max(std::abs(terms_.front().omega), std::abs(terms_.back().omega));
}

ExpSum canonicalize_with_floor(std::vector<Term> terms, const AlgebraOptions& opts,
                               double abs_floor, double inherited_discard) {
  for (const auto& t : terms) {
    if (!std::isfinite(t.omega) || !std::isfinite(t.q.real()) ||
        !std::isfinite(t.q.imag())) {
      throw Error(ErrorKind::invalid_input, "non-finite frequency or coefficient");
    }
  }
  std::sort(terms.begin(), terms.end(), term_less);

  // Merge clusters: a cluster starts at its smallest frequency and absorbs
  // everything within freq_tol of that start. The representative frequency is
  // the one carrying the largest coefficient.
  std::vector<Term> merged;
  merged.reserve(terms.size());
  std::size_t i = 0;
  while (i < terms.size()) {
    const double start = terms[i].omega;
    complex sum{};
    double rep = start;
    double rep_mag = -1.0;
    std::size_t j = i;
    for (; j < terms.size() && terms[j].omega - start <= opts.freq_tol; ++j) {
      sum += terms[j].q;
      const double mag = std::abs(terms[j].q);
      if (mag > rep_mag) {
        rep_mag = mag;
        rep = terms[j].omega;
      }
    }
    merged.push_back({rep, sum});
    i = j;
  }
  // Representatives of adjacent clusters can still sit within freq_tol.
  std::size_t kept = 0;
  for (std::size_t k = 1; k < merged.size(); ++k) {
    if (merged[k].omega - merged[kept].omega <= opts.freq_tol) {
      if (std::abs(merged[k].q) > std::abs(merged[kept].q)) merged[kept].omega = merged[k].omega;
      merged[kept].q += merged[k].q;
    } else {
      merged[++kept] = merged[k];
    }
  }
  if (!merged.empty()) merged.resize(kept + 1);

  double norm = 0.0;
  for (const auto& t : merged) norm += std::abs(t.q);
  const double floor = std::max(opts.prune_tol * norm, abs_floor);

  ExpSum out;
  out.discarded_ = inherited_discard;
  out.terms_.reserve(merged.size());
  for (const auto& t : merged) {
    const double mag = std::abs(t.q);
    if (mag == 0.0 || mag < floor) {
      out.discarded_ += mag;
      continue;
    }
    out.terms_.push_back(t);
  }
  return out;
}

ExpSum canonicalize(std::vector<Term> terms, const AlgebraOptions& opts) {
  return canonicalize_with_floor(std::move(terms), opts, 0.0);
}

complex evaluate(const ExpSum& f, complex z) {
  const double x = z.real();
  const double y = z.imag();
  complex sum{};
  for (const auto& t : f.terms()) {
    const double growth = -kTwoPi * t.omega * y;
    if (growth > kMaxExponent) {
      throw Error(ErrorKind::overflow, "evaluate: exp overflow at Im z = " +
                                           std::to_string(y) + " (use log_abs)");
    }
    sum += t.q * std::exp(growth) * cis_cycles(product_cycles(t.omega, x));
  }
  return sum;
}

double log_abs(const ExpSum& f, complex z) {
  if (f.empty()) return -std::numeric_limits<double>::infinity();
  const double x = z.real();
  const double y = z.imag();
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : f.terms()) {
    top = std::max(top, std::log(std::abs(t.q)) - kTwoPi * t.omega * y);
  }
  complex sum{};
  for (const auto& t : f.terms()) {
    const double e = std::log(std::abs(t.q)) - kTwoPi * t.omega * y - top;
    sum += (t.q / std::abs(t.q)) * std::exp(e) * cis_cycles(product_cycles(t.omega, x));
  }
  return top + std::log(std::abs(sum));
}

ExpSum add(const ExpSum& f, const ExpSum& g, const AlgebraOptions& opts) {
  std::vector<Term> terms(f.terms().begin(), f.terms().end());
  terms.insert(terms.end(), g.terms().begin(), g.terms().end());
  auto out = canonicalize_with_floor(std::move(terms), opts, 0.0,
                                     f.discarded_mass() + g.discarded_mass());
  check_capacity(out.size(), opts, "add");
  return out;
}

ExpSum scale(const ExpSum& f, complex c, const AlgebraOptions& opts) {
  std::vector<Term> terms;
  terms.reserve(f.size());
  for (const auto& t : f.terms()) terms.push_back({t.omega, t.q * c});
  return canonicalize_with_floor(std::move(terms), opts, 0.0,
                                 f.discarded_mass() * std::abs(c));
}

ExpSum subtract(const ExpSum& f, const ExpSum& g, const AlgebraOptions& opts) {
  return add(f, scale(g, -1.0, opts), opts);
}

namespace {

ExpSum multiply_impl(const ExpSum& f, const ExpSum& g, double max_frequency,
                     double abs_floor, const AlgebraOptions& opts) {
  const std::size_t raw = f.size() * g.size();
  // Merging rarely shrinks a product by more than this factor; refusing early
  // keeps the intermediate allocation bounded.
  if (raw / 64 > opts.max_terms) check_capacity(raw / 64, opts, "multiply");
  std::vector<Term> terms;
  terms.reserve(raw);
  for (const auto& a : f.terms()) {
    for (const auto& b : g.terms()) {
      const double w = a.omega + b.omega;
      if (w > max_frequency + opts.freq_tol) break;  // g is sorted
      terms.push_back({w, a.q * b.q});
    }
  }
  const double inherited = f.discarded_mass() * g.wiener_norm() +
                           g.discarded_mass() * f.wiener_norm() +
                           f.discarded_mass() * g.discarded_mass();
  auto out = canonicalize_with_floor(std::move(terms), opts, abs_floor, inherited);
  check_capacity(out.size(), opts, "multiply");
  return out;
}

// Drops the smallest coefficients while their total stays below `budget`.
ExpSum prune_to_budget(const ExpSum& f, double budget, const AlgebraOptions& opts) {
  std::vector<double> mags;
  mags.reserve(f.size());
  for (const auto& t : f.terms()) mags.push_back(std::abs(t.q));
  std::sort(mags.begin(), mags.end());
  double dropped = 0.0;
  double floor = 0.0;
  for (double m : mags) {
    if (dropped + m >= budget) {
      floor = m;
      break;
    }
    dropped += m;
  }
  if (floor == 0.0) return f.empty() ? f : canonicalize_with_floor({}, opts, 0.0, f.discarded_mass() + dropped);
  std::vector<Term> terms(f.terms().begin(), f.terms().end());
  return canonicalize_with_floor(std::move(terms), opts, floor, f.discarded_mass());
}

}  // namespace

ExpSum multiply(const ExpSum& f, const ExpSum& g, const AlgebraOptions& opts) {
  return multiply_impl(f, g, std::numeric_limits<double>::infinity(), 0.0, opts);
}

ExpSum multiply_truncated(const ExpSum& f, const ExpSum& g, double max_frequency,
                          const AlgebraOptions& opts) {
  if ((!f.empty() && f.min_frequency() < -opts.freq_tol) ||
      (!g.empty() && g.min_frequency() < -opts.freq_tol)) {
    throw Error(ErrorKind::domain, "multiply_truncated: negative frequency in a one-sided series");
  }
  return multiply_impl(f, g, max_frequency, 0.0, opts);
}

ExpSum derivative(const ExpSum& f, const AlgebraOptions& opts) {
  std::vector<Term> terms;
  terms.reserve(f.size());
  for (const auto& t : f.terms()) {
    terms.push_back({t.omega, complex(0.0, kTwoPi * t.omega) * t.q});
  }
  return canonicalize_with_floor(std::move(terms), opts, 0.0,
                                 f.discarded_mass() * kTwoPi * f.max_abs_frequency());
}

ExpSum at_height(const ExpSum& f, double s, const AlgebraOptions& opts) {
  std::vector<Term> terms;
  terms.reserve(f.size());
  double worst = 0.0;
  for (const auto& t : f.terms()) {
    const double e = -kTwoPi * t.omega * s;
    if (e > kMaxExponent) {
      throw Error(ErrorKind::overflow, "at_height: exp overflow for s = " + std::to_string(s));
    }
    worst = std::max(worst, std::exp(e));
    terms.push_back({t.omega, t.q * std::exp(e)});
  }
  return canonicalize_with_floor(std::move(terms), opts, 0.0, f.discarded_mass() * worst);
}

ExpSum shift_frequencies(const ExpSum& f, double c, const AlgebraOptions& opts) {
  std::vector<Term> terms;
  terms.reserve(f.size());
  for (const auto& t : f.terms()) terms.push_back({t.omega + c, t.q});
  return canonicalize_with_floor(std::move(terms), opts, 0.0, f.discarded_mass());
}

ExpSum reflect(const ExpSum& f, const AlgebraOptions& opts) {
  std::vector<Term> terms;
  terms.reserve(f.size());
  for (const auto& t : f.terms()) terms.push_back({-t.omega, std::conj(t.q)});
  return canonicalize_with_floor(std::move(terms), opts, 0.0, f.discarded_mass());
}

ExpSum centered(const ExpSum& f, const AlgebraOptions& opts) {
  if (f.empty()) return f;
  const double mid = 0.5 * (f.min_frequency() + f.max_frequency());
  if (mid == 0.0) return f;
  return shift_frequencies(f, -mid, opts);
}

HeightRule auto_height(const ExpSum& f) {
  if (f.empty()) throw Error(ErrorKind::domain, "auto_height: empty sum");
  const auto terms = f.terms();
  const double q1 = std::abs(terms[0].q);
  const std::size_t n = terms.size();

  // tail[k] = sum_{m >= k} |q_m / q_1| over 0-based indices.
  std::vector<double> tail(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) tail[k] = tail[k + 1] + std::abs(terms[k].q) / q1;

  HeightRule rule;
  rule.total_ratio = tail[1];
  std::size_t m = 1;
  while (tail[m] >= 1.0 / 3.0) ++m;  // terminates: tail[n] == 0
  rule.head_terms = m;
  rule.tail_ratio = tail[m];

  if (m == 1 || 3.0 * rule.total_ratio < 1.0) {
    rule.height = 0.0;
    return rule;
  }
  const double gap = terms[1].omega - terms[0].omega;
  const double s = std::log(3.0 * rule.total_ratio) / (kTwoPi * gap);
  // The bound is strict; step just past its infimum.
  rule.height = std::max(0.0, s * (1.0 + 1e-9) + 1e-15);
  return rule;
}

ExpSum normalized_remainder(const ExpSum& f, double s, const AlgebraOptions& opts) {
  if (f.empty()) throw Error(ErrorKind::domain, "normalized_remainder: empty sum");
  const auto terms = f.terms();
  const double w1 = terms[0].omega;
  const complex q1 = terms[0].q;
  std::vector<Term> h;
  h.reserve(terms.size());
  for (std::size_t k = 1; k < terms.size(); ++k) {
    const double dw = terms[k].omega - w1;
    const double e = -kTwoPi * dw * s;
    if (e > kMaxExponent) {
      throw Error(ErrorKind::overflow, "normalized_remainder: exp overflow at s = " + std::to_string(s));
    }
    h.push_back({dw, terms[k].q / q1 * std::exp(e)});
  }
  return canonicalize(std::move(h), opts);
}

NeumannInverse neumann_inverse(const ExpSum& f, std::optional<double> s,
                               const NeumannOptions& opts) {
  if (f.empty()) throw Error(ErrorKind::domain, "neumann_inverse: empty sum has no inverse");
  NeumannInverse res;
  if (s) {
    res.height = *s;
  } else {
    res.rule = auto_height(f);
    res.height = res.rule->height;
  }
  const auto& alg = opts.algebra;
  const ExpSum h = normalized_remainder(f, res.height, alg);
  res.h_norm = h.wiener_norm();
  if (res.h_norm >= 1.0) {
    std::ostringstream os;
    os << "neumann_inverse: ||H||_W = " << res.h_norm << " >= 1 at s = " << res.height
       << "; choose a larger height";
    throw Error(ErrorKind::divergence, os.str());
  }
  // Dropping mass m from a power moves the residual (1 + H) S - 1 by at most m,
  // so pruning inside the loop draws on a fixed budget instead of a per-term floor.
  AlgebraOptions exact = alg;
  exact.prune_tol = 0.0;
  const ExpSum minus_h = scale(h, -1.0, exact);
  ExpSum sum = canonicalize({{0.0, complex(1.0, 0.0)}}, exact);
  ExpSum power = sum;
  const double stop = opts.tol * (1.0 - res.h_norm);
  // ||H||^j falls below stop after about this many steps; the budget is spread evenly.
  const double steps = res.h_norm > 0.0 ? std::ceil(std::log(stop) / std::log(res.h_norm)) + 1.0 : 1.0;
  const double budget = 0.5 * opts.tol / std::max(1.0, steps);
  int j = 0;
  while (power.wiener_norm() >= stop) {
    if (++j > opts.max_iterations) {
      throw Error(ErrorKind::convergence, "neumann_inverse: iteration cap exceeded");
    }
    power = prune_to_budget(multiply_impl(power, minus_h, std::numeric_limits<double>::infinity(), 0.0, exact),
                            budget, exact);
    sum = add(sum, power, exact);
  }
  res.iterations = j;
  sum = prune_to_budget(sum, 0.2 * opts.tol, exact);
  res.series_norm = sum.wiener_norm();

  const auto terms = f.terms();
  const double w1 = terms[0].omega;
  const double growth = kTwoPi * w1 * res.height;
  if (growth > kMaxExponent) {
    throw Error(ErrorKind::overflow, "neumann_inverse: exp overflow in the leading factor");
  }
  const complex lead = std::exp(growth) / terms[0].q;
  std::vector<Term> inv;
  inv.reserve(sum.size());
  for (const auto& t : sum.terms()) inv.push_back({t.omega - w1, t.q * lead});
  res.inverse = canonicalize_with_floor(std::move(inv), exact, 0.0,
                                        sum.discarded_mass() * std::abs(lead));
  return res;
}

ExpSum exp_series(const ExpSum& g, const AlgebraOptions& opts, int max_iterations) {
  // exp(c + g0) = e^c exp(g0) with c the constant coefficient.
  complex c{};
  std::vector<Term> rest;
  for (const auto& t : g.terms()) {
    if (std::abs(t.omega) <= opts.freq_tol) {
      c += t.q;
    } else {
      rest.push_back(t);
    }
  }
  const ExpSum g0 = canonicalize(std::move(rest), opts);
  const double norm = g0.wiener_norm();

  ExpSum sum = canonicalize({{0.0, complex(1.0, 0.0)}}, opts);
  ExpSum power = sum;
  for (int k = 1;; ++k) {
    if (k > max_iterations) {
      throw Error(ErrorKind::capacity, "exp_series: power series did not converge");
    }
    power = multiply_impl(power, g0, std::numeric_limits<double>::infinity(),
                          opts.prune_tol * sum.wiener_norm(), opts);
    power = scale(power, 1.0 / k, opts);
    sum = add(sum, power, opts);
    // Beyond k + 1 > 2||g0|| the remaining terms are bounded by a geometric
    // series with ratio 1/2.
    if (power.empty() ||
        (k + 1 > 2.0 * norm && 2.0 * power.wiener_norm() < opts.prune_tol * sum.wiener_norm())) {
      break;
    }
  }
  return scale(sum, std::exp(c), opts);
}

}  // namespace qclab
