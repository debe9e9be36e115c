#pragma once

// Reference implementations used only by tests. They avoid the library's
// reshaping helpers and use plain loops over basis indices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "osqse/layout.hpp"
#include "osqse/state.hpp"

namespace oracle {

using cd = std::complex<double>;
using Dense = std::vector<std::vector<cd>>;

inline std::vector<std::size_t> digits_of(std::size_t index, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    d[k] = index % dims[k];
    index /= dims[k];
  }
  return d;
}

inline std::size_t index_of(const std::vector<std::size_t>& digits, const std::vector<std::size_t>& dims) {
  std::size_t i = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) i = i * dims[k] + digits[k];
  return i;
}

/// ρ_keep[(i),(j)] = Σ_{traced t} ψ(i,t) conj(ψ(j,t)); `keep` holds subsystem
/// positions, in layout order.
inline Dense partial_trace(const std::vector<cd>& psi, const std::vector<std::size_t>& dims,
                           const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> kdims;
  for (auto k : keep) kdims.push_back(dims[k]);
  std::size_t kd = 1;
  for (auto d : kdims) kd *= d;
  Dense rho(kd, std::vector<cd>(kd, 0.0));
  const std::size_t total = psi.size();
  for (std::size_t a = 0; a < total; ++a) {
    auto da = digits_of(a, dims);
    for (std::size_t b = 0; b < total; ++b) {
      auto db = digits_of(b, dims);
      bool same_traced = true;
      for (std::size_t k = 0; k < dims.size() && same_traced; ++k)
        if (std::find(keep.begin(), keep.end(), k) == keep.end() && da[k] != db[k]) same_traced = false;
      if (!same_traced) continue;
      std::vector<std::size_t> ka, kb;
      for (auto k : keep) {
        ka.push_back(da[k]);
        kb.push_back(db[k]);
      }
      rho[index_of(ka, kdims)][index_of(kb, kdims)] += psi[a] * std::conj(psi[b]);
    }
  }
  return rho;
}

/// Largest sum of exactly k entries, by enumerating subsets.
inline double best_subset_sum(const std::vector<double>& p, std::size_t k) {
  const std::size_t n = p.size();
  double best = k == 0 ? 0.0 : -1.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s += p[i];
    best = std::max(best, s);
  }
  return best;
}

/// p majorizes q iff for every k the best k-subset of p dominates that of q.
inline bool majorizes(std::vector<double> p, std::vector<double> q, double tol) {
  const std::size_t n = std::max(p.size(), q.size());
  p.resize(n, 0.0);
  q.resize(n, 0.0);
  for (std::size_t k = 1; k <= n; ++k)
    if (best_subset_sum(p, k) < best_subset_sum(q, k) - tol) return false;
  return true;
}

/// Rényi entropy in bits from the textbook formulas, in long double.
inline double renyi(const std::vector<double>& p, double alpha) {
  std::vector<long double> v;
  for (double x : p)
    if (x > 0) v.push_back(x);
  if (alpha == 0) return std::log2(static_cast<long double>(v.size()));
  if (std::isinf(alpha)) return -std::log2(*std::max_element(v.begin(), v.end()));
  if (alpha == 1) {
    long double h = 0;
    for (auto x : v) h -= x * std::log2(x);
    return static_cast<double>(h);
  }
  long double s = 0;
  for (auto x : v) s += std::pow(x, static_cast<long double>(alpha));
  return static_cast<double>(std::log2(s) / (1.0L - alpha));
}

inline std::vector<double> random_probabilities(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  for (auto& x : p) x = e(rng) + 1e-3;
  double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& x : p) x /= s;
  return p;
}

inline osqse::CVector random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  osqse::CVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cd(g(rng), g(rng));
  return v / v.norm();
}

inline osqse::PureState random_state(std::mt19937_64& rng, const osqse::SubsystemLayout& layout) {
  return osqse::PureState(layout, random_vector(rng, layout.total_dim()));
}

/// Amplitudes with the digits of subsystems at positions x and y swapped.
inline std::vector<cd> swap_digits(const std::vector<cd>& psi, const std::vector<std::size_t>& dims, std::size_t x,
                                   std::size_t y) {
  std::vector<cd> out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    auto d = digits_of(i, dims);
    std::swap(d[x], d[y]);
    out[index_of(d, dims)] = psi[i];
  }
  return out;
}

inline std::vector<cd> to_std(const osqse::CVector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace oracle
