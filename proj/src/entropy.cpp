#include "osqse/entropy.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <stdexcept>

namespace osqse {

ExtendedOrder ExtendedOrder::of(double alpha) {
  if (std::isnan(alpha) || alpha < 0) throw std::invalid_argument("Rényi order must lie in [0, inf]");
  if (alpha == 0) return zero();
  if (alpha == 1) return one();
  if (std::isinf(alpha)) return infinity();
  return ExtendedOrder(Kind::Finite, alpha);
}

std::string ExtendedOrder::to_string() const {
  switch (kind_) {
    case Kind::Zero: return "0";
    case Kind::One: return "1";
    case Kind::Infinity: return "inf";
    case Kind::Finite: break;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value_);
  return std::string(buf, res.ptr);
}

ExtendedOrder ExtendedOrder::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "∞") return infinity();
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size())
    throw std::invalid_argument("cannot parse Rényi order '" + text + "'");
  return of(v);
}

SplitSpectra SplitSpectra::of(const PureState& state) {
  const auto& layout = state.layout();
  auto a1 = layout.group(RoleGroup::A1);
  auto b1 = layout.group(RoleGroup::B1);
  auto a2 = layout.group(RoleGroup::A2);
  auto b2 = layout.group(RoleGroup::B2);
  auto join = [](std::vector<std::string> x, const std::vector<std::string>& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  return SplitSpectra{reduced_spectrum(state, join(a1, b2)), reduced_spectrum(state, join(b1, b2)),
                      reduced_spectrum(state, join(b1, a2)), reduced_spectrum(state, join(a1, a2))};
}

FSample SplitSpectra::evaluate(ExtendedOrder alpha) const {
  FSample s;
  s.alpha = alpha;
  s.term_split_A = renyi_entropy(a1b2, alpha) - renyi_entropy(b, alpha);
  s.term_split_B = renyi_entropy(b1a2, alpha) - renyi_entropy(a, alpha);
  s.f = std::max(s.term_split_A, s.term_split_B);
  return s;
}

FSample f_value(const PureState& state, ExtendedOrder alpha) { return SplitSpectra::of(state).evaluate(alpha); }

std::vector<ExtendedOrder> alpha_grid(const GridConfig& config) {
  if (config.log_points < 2 || !(config.log_min > 0) || !(config.log_max > config.log_min))
    throw std::invalid_argument("invalid α grid configuration");
  std::vector<ExtendedOrder> grid{ExtendedOrder::zero(), ExtendedOrder::one(), ExtendedOrder::infinity()};
  const double lo = std::log10(config.log_min), hi = std::log10(config.log_max);
  for (std::size_t i = 0; i < config.log_points; ++i) {
    double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(config.log_points - 1);
    grid.push_back(ExtendedOrder::of(std::pow(10.0, t)));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi, double resolution) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > resolution) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

OrderMaximum maximize_over_orders(const std::function<double(ExtendedOrder)>& g, const GridConfig& config) {
  OrderMaximum out;
  auto grid = alpha_grid(config);
  out.samples.reserve(grid.size() + 1);
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.samples.emplace_back(grid[i], g(grid[i]));
    if (out.samples[i].second > out.samples[best].second) best = i;
  }
  out.argmax = out.samples[best].first;
  out.value = out.samples[best].second;
  if (!out.argmax.is_finite_positive()) return out;

  // Refine inside the neighbouring grid cells; past the last finite grid point
  // the bracket extends by one more log step.
  const double here = out.argmax.value();
  const double lo = out.samples[best - 1].first.value();
  double hi = out.samples[best + 1].first.value();
  if (std::isinf(hi)) hi = here * here / std::max(lo, config.log_min);
  auto scalar = [&](double a) { return g(ExtendedOrder::of(a)); };
  double refined = golden_section_maximize(scalar, lo, hi, config.alpha_resolution);
  double refined_value = scalar(refined);
  if (refined_value > out.value) {
    auto order = ExtendedOrder::of(refined);
    out.argmax = order;
    out.value = refined_value;
    auto pos = std::lower_bound(out.samples.begin(), out.samples.end(), order,
                                [](const auto& s, ExtendedOrder a) { return s.first < a; });
    if (pos == out.samples.end() || !(pos->first == order)) out.samples.insert(pos, {order, refined_value});
  }
  return out;
}

CurveBound bound_1_2(const PureState& state, const GridConfig& config) {
  auto spectra = SplitSpectra::of(state);
  auto best = maximize_over_orders([&](ExtendedOrder a) { return spectra.evaluate(a).f; }, config);
  CurveBound out;
  out.report.bound_value = best.value;
  out.report.argmax_alpha = best.argmax;
  out.report.pair = ExchangePair::Split12;
  out.report.tolerance = 1e-9;
  out.report.alpha_resolution = config.alpha_resolution;
  out.curve.state_fingerprint = fingerprint(state);
  out.curve.samples.reserve(best.samples.size());
  for (const auto& [alpha, value] : best.samples) out.curve.samples.push_back(spectra.evaluate(alpha));
  return out;
}

BoundReport bound_pair(const PureState& state, ExchangePair pair, const GridConfig& config) {
  if (pair == ExchangePair::Split12) throw std::invalid_argument("bound_pair: use bound_1_2 for the split pair");
  auto [gx, gy] = exchanged_groups(pair);
  auto sx = reduced_spectrum(state, state.layout().group(gx));
  auto sy = reduced_spectrum(state, state.layout().group(gy));
  auto best = maximize_over_orders(
      [&](ExtendedOrder a) { return std::abs(renyi_entropy(sx, a) - renyi_entropy(sy, a)); }, config);
  BoundReport report;
  report.bound_value = best.value;
  report.argmax_alpha = best.argmax;
  report.pair = pair;
  report.tolerance = 1e-9;
  report.alpha_resolution = config.alpha_resolution;
  return report;
}

}  // namespace osqse
