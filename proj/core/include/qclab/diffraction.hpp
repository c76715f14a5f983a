#pragma once

// Pure point Fourier measures of zero counting measures: Bohr-mean estimates
// from the points, the exact atoms from the logarithmic derivative of the
// generating exponential sum, and the Poisson summation check between them.

#include <optional>
#include <utility>
#include <vector>

#include "qclab/wiener.hpp"
#include "qclab/zeros.hpp"

namespace qclab {

struct Atom {
  double gamma = 0.0;
  complex b{};

  friend bool operator==(const Atom&, const Atom&) = default;
};

// d (the mass at 0) plus atoms at nonzero frequencies, sorted by gamma.
// `cutoff` records the frequency range |gamma| <= cutoff the measure claims
// to cover; atoms beyond it were never computed.
class PointMeasure {
 public:
  PointMeasure() = default;
  // Sums atoms at identical gamma; throws on gamma == 0, non-finite values or d < 0.
  PointMeasure(double d, std::vector<Atom> atoms, std::optional<double> cutoff = {});

  double d() const noexcept { return d_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  double cutoff() const noexcept { return cutoff_; }
  bool empty() const noexcept { return atoms_.empty(); }

  // Mass at gamma (d at 0); zero when no atom lies within tol.
  complex mass_at(double gamma, double tol = 1e-9) const;

  // max |b(-gamma) - conj(b(gamma))| over atoms; an atom without a partner
  // counts with its own magnitude.
  double conjugate_symmetry_error(double tol = 1e-9) const;

  // Copy with the atoms at +-gamma removed.
  PointMeasure without(double gamma, double tol = 1e-9) const;

 private:
  double d_ = 0.0;
  std::vector<Atom> atoms_;
  double cutoff_ = 0.0;
};

struct BohrEstimate {
  complex value{};
  double error = 0.0;  // k1 / T heuristic
};

// (1 / 2T) sum_{|a_n| < T} mult * exp(-2 pi i gamma a_n). Needs [-T, T]
// inside the window of A.
BohrEstimate bohr_coefficient(const ZeroSet& a, double gamma, double t);

// Atoms at grid points with |estimate(T)| > threshold and
// |estimate(T) - estimate(T/2)| < threshold / 4; d from gamma = 0.
PointMeasure bohr_scan(const ZeroSet& a, const std::vector<double>& grid, double t,
                       double threshold);

struct BohrSearchOptions {
  double start_t = 8.0;    // coarsest averaging length
  double oversample = 8.0; // grid points per 1/T
};

// Grid search without prior knowledge of the spectrum: a coarse scan at small
// T, then every candidate is tracked through doubling T and finally located
// by maximizing |estimate| at the requested T. Returns atoms in
// [-gamma_max, gamma_max] passing the bohr_scan acceptance rule.
PointMeasure bohr_search(const ZeroSet& a, double gamma_max, double t, double threshold,
                         const BohrSearchOptions& opts = {});

struct LogDerivOptions {
  std::optional<double> height;  // s; chosen by auto_height() when absent
  double cutoff = 10.0;          // atoms with 0 < gamma < cutoff
  double atom_floor = 1e-12;     // atoms below atom_floor * max(1, d) are dropped
  bool check_realness = true;
  std::optional<Window> realness_window;  // default: about 25 / d around 0
  ZeroOptions zeros{};
  AlgebraOptions algebra{};
};

struct LogDerivMeasure {
  PointMeasure measure;
  double height = 0.0;
  double h_norm = 0.0;          // ||H||_W at the height
  double norm_at_height = 0.0;  // ||f' / f at height||_W over the computed terms
  double c_f_bound = 0.0;       // 6 pi max|omega_n| e^{2pi(omega_n - omega_1)s} sum|q_n/q_1|
  double spectrum_shift = 0.0;  // frequency shift applied to center the spectrum
  std::size_t terms = 0;        // terms of the truncated log-derivative series
  Window realness_window{};
  double strip_height = 0.0;
  RealnessReport realness{};
};

// Expands f'/f on a line Im z = s above every zero as sum_g p_g e^{2 pi i g z}
// and reads off d = -p_0 / (pi i) and b_g = i p_g / (2 pi) for g > 0; negative
// atoms by conjugate symmetry.
LogDerivMeasure logderiv_measure(const ExpSum& f, const LogDerivOptions& opts = {});

struct GaussianSpec {
  double sigma = 1.0;       // g(x) = exp(-pi x^2 / sigma^2), g^(t) = sigma exp(-pi sigma^2 t^2)
  double tail_tol = 1e-10;
  bool enforce_tails = true;  // false: report the tail bounds without failing
};

struct PoissonResidual {
  double residual = 0.0;
  double point_side = 0.0;      // sum_n mult * g^(a_n)
  complex spectral_side{};      // d + sum_gamma b_gamma g(gamma)
  double point_tail = 0.0;      // bound on the point sum outside the window
  double spectral_tail = 0.0;   // bound on atoms beyond the measure cutoff
};

PoissonResidual poisson_residual(const ZeroSet& a, const PointMeasure& mu,
                                 const GaussianSpec& test = {});

struct GrowthProfile {
  std::vector<std::pair<double, double>> m_of_s;  // (s, sum_{0<gamma<=s} |b|)
  double t3_value = 0.0;   // sum_{0<gamma<1} |b| / gamma
  double kappa_fit = 0.0;  // slope of log m against log s over the top decade
};

GrowthProfile growth_profile(const PointMeasure& mu, std::vector<double> s_grid);

// Largest total |b| of atoms inside any closed unit interval of frequencies.
double max_unit_mass(const PointMeasure& mu);

}  // namespace qclab
