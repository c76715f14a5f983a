#pragma once

// From zeros or diffraction atoms back to the generating function: the
// symmetric canonical product, the Dirichlet-series reconstruction from the
// atoms, and the g-function / exponential-type diagnostics.

#include <optional>
#include <utility>
#include <vector>

#include "qclab/diffraction.hpp"
#include "qclab/wiener.hpp"
#include "qclab/zeros.hpp"

namespace qclab {

struct ProductValue {
  complex value{};
  complex log_value{};         // log of the value; real part is log|P|
  double error_estimate = 0.0; // relative, from the paired tail
  complex tail_log{};          // correction added for the pairs beyond the window
  long pairs = 0;              // N: factors (a_n, a_-n) multiplied, n = 1..N
  int zero_multiplicity = 0;   // > 0 when z is a point of A (value is then 0)
  double translation = 0.0;    // delta when A contained 0: P_{A+delta}(z+delta)
};

// (1 - z/a_0) prod_{n=1..N} (1 - z/a_n)(1 - z/a_-n), a_0 the smallest
// nonnegative point, plus an estimate of the missing pairs.
ProductValue canonical_product(const ZeroSet& a, complex z);

struct LogSeriesOptions {
  double t3_budget = 1e3;  // sum_{0<gamma<1} |b|/gamma allowed before flagging
  bool strict = false;     // throw instead of flagging when over budget
  AlgebraOptions algebra{};
};

struct LogSeries {
  ExpSum series;          // sum_{gamma>0} -(b/gamma) e^{-2 pi gamma} e^{2 pi i gamma x}
  double norm = 0.0;
  double t3_value = 0.0;
  bool over_budget = false;
  double tail_bound = 0.0;  // bound on the dropped |gamma| >= cutoff terms, per unit mass
};

LogSeries log_series_at_height_one(const PointMeasure& mu, double d,
                                   const LogSeriesOptions& opts = {});

struct Rebuilt {
  ExpSum sum;                // normalized so that evaluate(sum, 0) == 1
  LogSeries log_series;
  ExpSum height_one;         // exp of the log series, before the frequency map
  bool degenerate = false;   // no atoms: a single exponential
  bool extremes_attained = false;
  double spectrum_width = 0.0;
  complex normalization{};   // the constant divided out
  double beyond_width_mass = 0.0;  // |coefficients| of exp(log series) above frequency d, dropped
};

Rebuilt rebuild_dirichlet(const PointMeasure& mu, double d, const LogSeriesOptions& opts = {});
Rebuilt rebuild_dirichlet(const PointMeasure& mu, const LogSeriesOptions& opts = {});

// sum_{0<gamma<1} b (e^{2 pi i gamma z} - 1) / gamma
complex g_function(const PointMeasure& mu, complex z);

enum class Verdict { bounded, growing, inconclusive };

const char* to_string(Verdict v) noexcept;

struct GReport {
  std::vector<std::pair<double, double>> windows;  // (X, sup_{|x|<=X} |g(x)|)
  double slope_fit = 0.0;
  Verdict bounded_verdict = Verdict::bounded;
  double sample_step = 0.0;
};

struct GOptions {
  double bounded_margin = 0.02;
  double growing_margin = 0.1;
};

GReport g_boundedness(const PointMeasure& mu, std::vector<double> x_grid,
                      const GOptions& opts = {});

struct TypeEstimate {
  double estimate = 0.0;   // two-point slope of log|f(iy)| at the two largest y
  double raw = 0.0;        // log|f(iy)| / y at the largest y
  std::vector<std::pair<double, double>> samples;  // (y, log|f(iy)|)
};

TypeEstimate exponential_type(const ExpSum& f, std::vector<double> y_grid);
TypeEstimate exponential_type(const ZeroSet& a, std::vector<double> y_grid);

}  // namespace qclab
