#pragma once

// Analytics of (finite windows of) almost periodic point sets: density,
// counting constants, almost periods, the n/d + phi(n) representation and the
// Lindelof / Krein-Levin partial-sum diagnostics.

#include <cstdint>
#include <optional>
#include <vector>

#include "qclab/wiener.hpp"
#include "qclab/zeros.hpp"

namespace qclab {

struct CountingConstants {
  long k1 = 1;  // max #A in a closed unit interval
  long k1_half_open = 1;  // max #A in a half-open unit interval [x, x+1)
  long k2 = 0;  // max |#A∩[x1,x1+h) - #A∩[x2,x2+h)| over sampled triples
  long windows_sampled = 0;
};

struct CountingOptions {
  std::uint64_t seed = 0;
  long samples = 10000;
  double max_h = 50.0;  // capped at a quarter of the usable window
};

// k1 exactly (sweep over unit windows starting at points); k2 from seeded
// random sampling plus windows snapped to points.
CountingConstants counting_constants(const ZeroSet& a, const CountingOptions& opts = {});

struct DensityEstimate {
  double d = 0.0;
  double window_length = 0.0;
  double error_bound = 0.0;  // (2 k2 + 2 k1) / length
  long count = 0;
};

DensityEstimate density(const ZeroSet& a, const CountingConstants& constants);
DensityEstimate density(const ZeroSet& a);

// a_n = n / d + phi(n), indexed so that a_0 is the smallest nonnegative point
// of the expanded (multiplicity-repeated) sequence.
class PhiRepresentation {
 public:
  PhiRepresentation(double d, long first_index, std::vector<double> phi);

  double d() const noexcept { return d_; }
  // Position of a_0 in the expanded sequence.
  long index_offset() const noexcept { return -first_; }
  long first_index() const noexcept { return first_; }
  long last_index() const noexcept { return first_ + static_cast<long>(phi_.size()) - 1; }
  bool covers(long n) const noexcept { return n >= first_index() && n <= last_index(); }
  double phi(long n) const;
  const std::vector<double>& values() const noexcept { return phi_; }
  double sup_abs() const noexcept { return sup_abs_; }

  // n / d + phi(n); reproduces a_n bit for bit.
  double point(long n) const;

 private:
  double d_;
  long first_;
  std::vector<double> phi_;
  double sup_abs_ = 0.0;
};

PhiRepresentation phi_representation(const ZeroSet& a, double d);

struct PhiCoefficient {
  double theta = 0.0;
  complex value{};
  double error_estimate = 0.0;
};

// Bohr means (1 / (2N + 1)) sum_{|n| <= N} phi(n) exp(-2 pi i theta n).
// N defaults to the largest symmetric index range available; N >= 100.
std::vector<PhiCoefficient> phi_fourier(const PhiRepresentation& phi,
                                        const std::vector<double>& thetas,
                                        std::optional<long> n = {});

struct AlmostPeriod {
  double tau = 0.0;
  long shift = 0;      // index shift h: a_{n+h} ~ a_n + tau
  double sup_dev = 0.0;
};

struct AlmostPeriodReport {
  double epsilon = 0.0;
  Window search_range{};
  double d = 0.0;
  double edge_band = 0.0;
  long shifts_scanned = 0;
  std::vector<AlmostPeriod> periods;
  double max_gap = 0.0;  // largest gap between consecutive reported tau
};

// d defaults to a least squares fit of a_n against n.
AlmostPeriodReport almost_periods(const ZeroSet& a, double epsilon, Window tau_range,
                                  std::optional<double> d = {});

struct Translation {
  ZeroSet set;
  double delta = 0.0;  // set = original + delta
};

// Moves the set by half the smallest gap around 0 when 0 is a point;
// identity otherwise.
Translation translate_off_origin(const ZeroSet& a);

struct LindelofReport {
  std::vector<double> radii;
  std::vector<double> sums;  // sum_{|a_n| < N} 1 / a_n for each N
  double cauchy_stat = 0.0;  // max - min of sums over the upper half of radii
};

LindelofReport lindelof_sum(const ZeroSet& a, std::vector<double> radii);

struct KreinLevinReport {
  long n = 0;
  std::vector<long> taus;
  std::vector<double> sums;  // sum_{0<|n|<=N} (phi(n+tau) - phi(n)) / n
  double sup_abs = 0.0;
  double sup = 0.0;
};

KreinLevinReport krein_levin_diagnostic(const PhiRepresentation& phi,
                                        const std::vector<long>& taus, long n);

}  // namespace qclab
