#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qclab/qclab.hpp"

namespace qclab::testing {

inline constexpr double kPi = std::numbers::pi;
inline const double kSqrt2 = std::sqrt(2.0);

// cos(pi z) = (e^{-i pi z} + e^{i pi z}) / 2
inline ExpSum cos_sum() { return canonicalize({{-0.5, 0.5}, {0.5, 0.5}}); }

// cos(pi a z)
inline ExpSum cos_sum(double a) { return canonicalize({{-0.5 * a, 0.5}, {0.5 * a, 0.5}}); }

// cos(pi z) cos(sqrt2 pi z): zeros on (Z + 1/2) and (Z + 1/2) / sqrt2
inline ExpSum union_sum() { return multiply(cos_sum(), cos_sum(kSqrt2)); }

// {(k + offset) * spacing : lo <= point <= hi}, each with multiplicity `mult`.
inline ZeroSet lattice(double offset, double spacing, Window w, int mult = 1) {
  std::vector<Zero> pts;
  const long k0 = static_cast<long>(std::ceil(w.lo / spacing - offset));
  const long k1 = static_cast<long>(std::floor(w.hi / spacing - offset));
  for (long k = k0; k <= k1; ++k) pts.push_back({(static_cast<double>(k) + offset) * spacing, mult});
  return ZeroSet(w, std::move(pts));
}

inline ZeroSet half_integers(Window w, int mult = 1) { return lattice(0.5, 1.0, w, mult); }

// Union of Z + 1/2 and (Z + 1/2) / sqrt2, generated directly.
inline ZeroSet union_lattice(Window w) {
  std::vector<Zero> pts;
  const ZeroSet a = half_integers(w);
  const ZeroSet b = lattice(0.5, 1.0 / kSqrt2, w);
  pts.insert(pts.end(), a.points().begin(), a.points().end());
  pts.insert(pts.end(), b.points().begin(), b.points().end());
  return ZeroSet(w, std::move(pts));
}

// Exact diffraction of Z + 1/2: d = 1, b_k = (-1)^k for 0 < |k| <= kmax.
inline PointMeasure half_integer_measure(int kmax) {
  std::vector<Atom> atoms;
  for (int k = 1; k <= kmax; ++k) {
    const double s = (k % 2 == 0) ? 1.0 : -1.0;
    atoms.push_back({static_cast<double>(k), s});
    atoms.push_back({-static_cast<double>(k), s});
  }
  return PointMeasure(1.0, std::move(atoms));
}

// Random canonical sum with n terms, frequencies in [-wmax, wmax].
inline ExpSum random_sum(std::mt19937_64& rng, int n, double wmax) {
  std::uniform_real_distribution<double> freq(-wmax, wmax);
  std::normal_distribution<double> coef(0.0, 1.0);
  std::vector<Term> t;
  for (int i = 0; i < n; ++i) t.push_back({freq(rng), complex(coef(rng), coef(rng))});
  return canonicalize(std::move(t));
}

inline double rel_err(complex a, complex b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace qclab::testing
