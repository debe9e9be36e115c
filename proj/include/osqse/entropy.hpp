#pragma once

#include <cmath>
#include <compare>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "osqse/state.hpp"

namespace osqse {

/// Rényi order on the extended half-line [0, ∞]. Zero, one and infinity are
/// distinguished so entropies use their closed forms there.
class ExtendedOrder {
public:
  enum class Kind { Zero, Finite, One, Infinity };

  static constexpr ExtendedOrder zero() { return ExtendedOrder(Kind::Zero, 0.0); }
  static constexpr ExtendedOrder one() { return ExtendedOrder(Kind::One, 1.0); }
  static constexpr ExtendedOrder infinity() {
    return ExtendedOrder(Kind::Infinity, std::numeric_limits<double>::infinity());
  }
  /// Any alpha in [0, ∞]; 0, 1 and +inf map to their special kinds.
  static ExtendedOrder of(double alpha);

  constexpr Kind kind() const { return kind_; }
  constexpr double value() const { return value_; }
  constexpr bool is_finite_positive() const { return kind_ == Kind::Finite || kind_ == Kind::One; }

  friend constexpr bool operator==(ExtendedOrder a, ExtendedOrder b) { return a.value_ == b.value_; }
  friend constexpr auto operator<=>(ExtendedOrder a, ExtendedOrder b) { return a.value_ <=> b.value_; }

  /// "0", "1", "inf" or the shortest round-tripping decimal.
  std::string to_string() const;
  static ExtendedOrder parse(const std::string& text);

private:
  constexpr ExtendedOrder(Kind kind, double value) : kind_(kind), value_(value) {}

  Kind kind_;
  double value_;
};

/// Rényi entropy in bits: S_0 = log2 rank, S_1 = -Σ λ log2 λ,
/// S_∞ = -log2 λ_max, otherwise log2(Σ λ^α) / (1 - α).
template <typename Real>
Real renyi_entropy(const BasicSpectrum<Real>& spec, ExtendedOrder alpha) {
  using std::log, std::log2, std::expm1, std::log1p, std::exp;
  const auto& p = spec.values();
  switch (alpha.kind()) {
    case ExtendedOrder::Kind::Zero: return log2(static_cast<Real>(p.size()));
    case ExtendedOrder::Kind::Infinity: return -log2(spec.max());
    case ExtendedOrder::Kind::One: {
      Real h = 0;
      for (Real v : p) h -= v * log2(v);
      return h;
    }
    case ExtendedOrder::Kind::Finite: break;
  }
  const Real a = static_cast<Real>(alpha.value());
  const Real ln2 = log(Real(2));
  if (std::abs(a - Real(1)) < Real(0.5)) {
    // Σ λ^α - 1 = Σ λ (λ^{α-1} - 1), kept accurate near α = 1
    Real excess = 0;
    for (Real v : p) excess += v * expm1((a - Real(1)) * log(v));
    return log1p(excess) / ((Real(1) - a) * ln2);
  }
  // log-sum-exp around the largest eigenvalue so large α does not underflow
  const Real log_max = log(spec.max());
  Real tail = 0;
  for (Real v : p) tail += exp(a * (log(v) - log_max));
  return (a * log_max + log(tail)) / ((Real(1) - a) * ln2);
}

/// One evaluation of f(α) = max(term_split_A, term_split_B) with
/// term_split_A = S_α(A1B2) - S_α(B) and term_split_B = S_α(B1A2) - S_α(A).
struct FSample {
  ExtendedOrder alpha = ExtendedOrder::zero();
  double f = 0;
  double term_split_A = 0;
  double term_split_B = 0;
};

/// The four reduced spectra f depends on; computing them once makes each
/// α-evaluation O(rank).
struct SplitSpectra {
  Spectrum a1b2;
  Spectrum b;
  Spectrum b1a2;
  Spectrum a;

  static SplitSpectra of(const PureState& state);
  FSample evaluate(ExtendedOrder alpha) const;
};

/// f(α) with both split terms. Needs roles A1 and B1; absent A2/B2/R are
/// treated as trivial.
FSample f_value(const PureState& state, ExtendedOrder alpha);

struct RenyiCurve {
  std::vector<FSample> samples;  // sorted by α: zero first, infinity last
  std::string state_fingerprint;
};

struct BoundReport {
  double bound_value = 0;  // ebits
  ExtendedOrder argmax_alpha = ExtendedOrder::zero();
  ExchangePair pair = ExchangePair::Split12;
  double tolerance = 0;         // numerical slack on bound_value
  double alpha_resolution = 0;  // golden-section stopping width around argmax
};

/// {0} ∪ log-spaced points ∪ {1, ∞}, followed by golden-section refinement of
/// the best grid point inside its neighbouring grid interval.
struct GridConfig {
  std::size_t log_points = 200;
  double log_min = 1e-3;
  double log_max = 1e3;
  double alpha_resolution = 1e-4;
};

/// The sorted grid of orders used by the bound searches.
std::vector<ExtendedOrder> alpha_grid(const GridConfig& config);

/// Maximizer of a unimodal function on [lo, hi] by golden-section search,
/// stopping once the bracket is narrower than `resolution`.
double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi, double resolution);

struct OrderMaximum {
  ExtendedOrder argmax = ExtendedOrder::zero();
  double value = 0;
  std::vector<std::pair<ExtendedOrder, double>> samples;  // grid plus refined point, sorted
};

/// Grid-then-refine maximization of g over [0, ∞]. Ties keep the smallest α.
OrderMaximum maximize_over_orders(const std::function<double(ExtendedOrder)>& g, const GridConfig& config);

struct CurveBound {
  BoundReport report;
  RenyiCurve curve;
};

/// Converse bound max_α f(α) on the entanglement cost of swapping A1 and B1
/// with A2B2 assisting.
CurveBound bound_1_2(const PureState& state, const GridConfig& config = {});

/// Converse bound max_α |S_α(X) - S_α(Y)| for X↔Y = A1↔B1 or A↔B.
BoundReport bound_pair(const PureState& state, ExchangePair pair, const GridConfig& config = {});

}  // namespace osqse
