#pragma once

// Finite exponential sums f(z) = sum_n q_n exp(2 pi i omega_n z) and their
// algebra under the Wiener norm ||f||_W = sum_n |q_n|. Frequencies are in
// cycles per unit length.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qclab {

using complex = std::complex<double>;

struct Term {
  double omega = 0.0;
  complex q{};

  friend bool operator==(const Term&, const Term&) = default;
};

struct AlgebraOptions {
  double freq_tol = 1e-9;      // frequencies closer than this are one frequency
  double prune_tol = 1e-14;    // relative to the Wiener norm of the result
  std::size_t max_terms = 200000;
};

// Canonical exponential sum: strictly increasing frequencies, no coefficient
// below prune_tol * norm. Only constructible through canonicalize() and the
// algebra operations below, so every instance satisfies the invariants.
class ExpSum {
 public:
  ExpSum() = default;

  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  double wiener_norm() const noexcept;
  double min_frequency() const;
  double max_frequency() const;
  // Largest |omega|; 0 for an empty sum.
  double max_abs_frequency() const noexcept;

  // Coefficient mass dropped by pruning while producing this value
  // (accumulated through the algebra operations).
  double discarded_mass() const noexcept { return discarded_; }

  friend bool operator==(const ExpSum& a, const ExpSum& b) {
    return a.terms_ == b.terms_;
  }

 private:
  friend ExpSum canonicalize_with_floor(std::vector<Term>, const AlgebraOptions&,
                                        double, double);
  std::vector<Term> terms_;
  double discarded_ = 0.0;
};

ExpSum canonicalize(std::vector<Term> terms, const AlgebraOptions& opts = {});

// Same as canonicalize(), additionally dropping every coefficient with
// |q| < abs_floor. `inherited_discard` is added to the discarded-mass budget.
ExpSum canonicalize_with_floor(std::vector<Term> terms, const AlgebraOptions& opts,
                               double abs_floor, double inherited_discard = 0.0);

complex evaluate(const ExpSum& f, complex z);

// log|f(z)| computed with the dominant exponential factored out, usable far
// beyond the range where evaluate() overflows. Returns -inf when f(z) == 0.
double log_abs(const ExpSum& f, complex z);

ExpSum add(const ExpSum& f, const ExpSum& g, const AlgebraOptions& opts = {});
ExpSum subtract(const ExpSum& f, const ExpSum& g, const AlgebraOptions& opts = {});
ExpSum scale(const ExpSum& f, complex c, const AlgebraOptions& opts = {});
ExpSum multiply(const ExpSum& f, const ExpSum& g, const AlgebraOptions& opts = {});

// Product restricted to frequencies <= max_frequency (+freq_tol). Both inputs
// must have nonnegative frequencies; used for formal one-sided series where
// the truncated coefficients are exact.
ExpSum multiply_truncated(const ExpSum& f, const ExpSum& g, double max_frequency,
                          const AlgebraOptions& opts = {});

ExpSum derivative(const ExpSum& f, const AlgebraOptions& opts = {});

// x -> f(x + i s), i.e. q_n -> q_n exp(-2 pi omega_n s).
ExpSum at_height(const ExpSum& f, double s, const AlgebraOptions& opts = {});

// Multiplication by exp(2 pi i c z): every frequency moves by c.
ExpSum shift_frequencies(const ExpSum& f, double c, const AlgebraOptions& opts = {});

// z -> conj(f(conj z)): frequencies negate, coefficients conjugate.
ExpSum reflect(const ExpSum& f, const AlgebraOptions& opts = {});

// Spectrum moved so that min_frequency == -max_frequency. Same zero set.
ExpSum centered(const ExpSum& f, const AlgebraOptions& opts = {});

struct HeightRule {
  double height = 0.0;       // s
  std::size_t head_terms = 1;  // M, 1-based count of leading terms
  double tail_ratio = 0.0;   // sum_{n>M} |q_n/q_1|
  double total_ratio = 0.0;  // sum_{n>=2} |q_n/q_1|
};

// Picks M, then s, so that sum_{n>M}|q_n/q_1| < 1/3 and
// exp(2 pi (omega_1 - omega_2) s) sum_{n>=2}|q_n/q_1| < 1/3, which forces
// ||H||_W < 2/3 for the normalized remainder H at height s.
HeightRule auto_height(const ExpSum& f);

struct NeumannOptions {
  double tol = 1e-10;
  int max_iterations = 10000;
  AlgebraOptions algebra{};
};

struct NeumannInverse {
  ExpSum inverse;            // x -> 1 / f(x + i s)
  double height = 0.0;
  double h_norm = 0.0;       // ||H||_W at that height
  double series_norm = 0.0;  // ||(1 + H)^-1||_W as computed
  int iterations = 0;
  std::optional<HeightRule> rule;  // set when the height was chosen automatically
};

// Remainder H(x) = sum_{n>=2} (q_n/q_1) exp(-2 pi (omega_n - omega_1) s)
// exp(2 pi i (omega_n - omega_1) x), so that
// f(x + i s) = q_1 exp(2 pi i omega_1 (x + i s)) (1 + H(x)).
ExpSum normalized_remainder(const ExpSum& f, double s, const AlgebraOptions& opts = {});

NeumannInverse neumann_inverse(const ExpSum& f, std::optional<double> s,
                               const NeumannOptions& opts = {});

// exp(g) summed as a power series in the algebra.
ExpSum exp_series(const ExpSum& g, const AlgebraOptions& opts = {},
                  int max_iterations = 10000);

}  // namespace qclab
