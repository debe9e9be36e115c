#include "osqse/zero_cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace osqse {
namespace {

struct PairGroups {
  std::vector<std::string> x;
  std::vector<std::string> y;
  std::size_t dx = 1;
  std::size_t dy = 1;
};

PairGroups pair_groups(const PureState& state, ExchangePair pair) {
  if (pair == ExchangePair::Split12)
    throw std::invalid_argument("zero-cost conditions are defined for the a1b1 and ab pairs");
  auto [gx, gy] = exchanged_groups(pair);
  PairGroups g{state.layout().group(gx), state.layout().group(gy)};
  g.dx = state.layout().dim_of(g.x);
  g.dy = state.layout().dim_of(g.y);
  return g;
}

void fix_phase(Eigen::Ref<CVector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-8) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
  }
}

/// Replaces the columns of `block` by Gram-Schmidt of P e_0, P e_1, ... with
/// P the projector onto their span.
void canonical_block_basis(Eigen::Ref<CMatrix> block) {
  const Eigen::Index n = block.rows(), k = block.cols();
  CMatrix projector = block * block.adjoint();
  CMatrix chosen(n, k);
  Eigen::Index found = 0;
  for (Eigen::Index j = 0; j < n && found < k; ++j) {
    CVector w = projector.col(j);
    for (Eigen::Index c = 0; c < found; ++c) w -= chosen.col(c) * chosen.col(c).dot(w);
    double norm = w.norm();
    if (norm < 1e-6) continue;
    chosen.col(found++) = w / norm;
  }
  if (found == k) block = chosen;
}

CMatrix pad(const CMatrix& m, Eigen::Index rows, Eigen::Index cols) {
  CMatrix out = CMatrix::Zero(rows, cols);
  out.topLeftCorner(m.rows(), m.cols()) = m;
  return out;
}

/// Unitary (or isometric) factor of the polar decomposition.
CMatrix polar_factor(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

CMatrix haar_unitary(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = {normal(rng), normal(rng)};
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    auto diag = r(i, i);
    if (std::abs(diag) > 0) q.col(i) *= diag / std::abs(diag);
  }
  return q;
}

/// Index ranges [begin, end) of degenerate eigenvalue blocks.
std::vector<std::pair<std::size_t, std::size_t>> degenerate_blocks(const std::vector<double>& values) {
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  if (values.empty()) return blocks;
  const double scale = values.front();
  std::size_t start = 0;
  for (std::size_t i = 1; i <= values.size(); ++i) {
    if (i == values.size() || std::abs(values[i] - values[start]) > kDegeneracyTolerance * scale) {
      blocks.emplace_back(start, i);
      start = i;
    }
  }
  return blocks;
}

struct ProcrustesRun {
  CMatrix U;
  CMatrix V;
  double residual = std::numeric_limits<double>::infinity();
};

double max_residual(const std::vector<CMatrix>& omegas, const std::vector<CMatrix>& targets, const CMatrix& U,
                    const CMatrix& V) {
  double worst = 0;
  for (std::size_t i = 0; i < omegas.size(); ++i)
    worst = std::max(worst, (targets[i] - U * omegas[i] * V).norm());
  return worst;
}

ProcrustesRun alternate(const std::vector<CMatrix>& omegas, const std::vector<double>& weights, CMatrix V,
                        std::size_t max_iterations, double tolerance) {
  const Eigen::Index d = V.rows();
  std::vector<CMatrix> targets;
  targets.reserve(omegas.size());
  for (const auto& w : omegas) targets.push_back(w.transpose());
  ProcrustesRun run;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < max_iterations; ++it) {
    CMatrix m = CMatrix::Zero(d, d);
    for (std::size_t i = 0; i < omegas.size(); ++i) m += weights[i] * targets[i] * V.adjoint() * omegas[i].adjoint();
    CMatrix U = polar_factor(m);
    CMatrix n = CMatrix::Zero(d, d);
    for (std::size_t i = 0; i < omegas.size(); ++i) n += weights[i] * targets[i].adjoint() * U * omegas[i];
    V = polar_factor(n).adjoint();
    double r = max_residual(omegas, targets, U, V);
    if (r < run.residual) run = {U, V, r};
    if (r < tolerance * 1e-3 || std::abs(previous - r) < 1e-15) break;
    previous = r;
  }
  return run;
}

}  // namespace

OmegaSet omega_matrices(const PureState& state, ExchangePair pair) {
  auto g = pair_groups(state, pair);
  std::vector<std::string> rows = g.x;
  rows.insert(rows.end(), g.y.begin(), g.y.end());
  CMatrix m = group_matrix(state, rows);
  CMatrix rho = m * m.adjoint();
  rho = (0.5 * (rho + rho.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  if (es.info() != Eigen::Success) throw StateError("omega_matrices: eigensolver failed");

  std::vector<double> values;
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = es.eigenvalues().size(); i-- > 0;) {
    if (es.eigenvalues()(i) > tol::kZeroCutoff) {
      values.push_back(es.eigenvalues()(i));
      cols.push_back(i);
    }
  }
  CMatrix vecs(rho.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) vecs.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(cols[j]);
  for (auto [b, e] : degenerate_blocks(values))
    if (e - b > 1)
      canonical_block_basis(vecs.middleCols(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(e - b)));

  OmegaSet out{{}, Spectrum::from_values(values), pair, g.dx, g.dy};
  for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
    fix_phase(vecs.col(j));
    CMatrix omega(static_cast<Eigen::Index>(g.dx), static_cast<Eigen::Index>(g.dy));
    for (std::size_t x = 0; x < g.dx; ++x)
      for (std::size_t y = 0; y < g.dy; ++y)
        omega(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) =
            vecs(static_cast<Eigen::Index>(x * g.dy + y), j);
    out.matrices.push_back(std::move(omega));
  }
  return out;
}

double exchange_residual(const OmegaSet& omegas, const CMatrix& U, const CMatrix& V) {
  if (U.cols() < static_cast<Eigen::Index>(omegas.dim_x) || U.rows() < static_cast<Eigen::Index>(omegas.dim_y) ||
      V.rows() < static_cast<Eigen::Index>(omegas.dim_y) || V.cols() < static_cast<Eigen::Index>(omegas.dim_x))
    throw DimensionMismatch("exchange_residual: isometry shapes do not fit the exchanged systems");
  double worst = 0;
  for (const auto& omega : omegas.matrices) {
    CMatrix lhs = pad(omega.transpose(), U.rows(), V.cols());
    CMatrix rhs = U * pad(omega, U.cols(), V.rows()) * V;
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

bool verify_exchange_isometries(const PureState& state, ExchangePair pair, const IsometryPair& candidate,
                                double tolerance) {
  auto g = pair_groups(state, pair);
  const auto dx = static_cast<Eigen::Index>(g.dx), dy = static_cast<Eigen::Index>(g.dy);
  const Eigen::Index d = std::max(dx, dy);
  const auto& U = candidate.U;
  const auto& V = candidate.V;
  auto fits = [&](Eigen::Index got, Eigen::Index want) { return got == want || got == d; };
  if (!fits(U.rows(), dy) || !fits(U.cols(), dx) || !fits(V.rows(), dy) || !fits(V.cols(), dx))
    throw DimensionMismatch("verify_exchange_isometries: U must be dim(Y)×dim(X) and V dim(Y)×dim(X)");
  if (!is_isometry<double>(U, 1e-8) || !is_isometry<double>(V, 1e-8))
    throw NotIsometryError("verify_exchange_isometries: candidate is not an isometry pair");

  std::vector<std::string> rows = g.x;
  rows.insert(rows.end(), g.y.begin(), g.y.end());
  CMatrix m = group_matrix(state, rows);
  const Eigen::Index block = U.rows() * V.cols();
  CVector mapped(block * m.cols()), target(block * m.cols());
  for (Eigen::Index r = 0; r < m.cols(); ++r) {
    CMatrix psi_r = m.col(r).reshaped<Eigen::RowMajor>(dx, dy);
    CMatrix out = U * pad(psi_r, U.cols(), V.rows()) * V;
    CMatrix want = pad(psi_r.transpose(), U.rows(), V.cols());
    mapped.segment(r * block, block) = out.reshaped();
    target.segment(r * block, block) = want.reshaped();
  }
  return phase_distance<double>(mapped, target) <= tolerance;
}

std::optional<IsometryPair> solve_exchange_isometries(const PureState& state, ExchangePair pair,
                                                      const SolverConfig& config) {
  auto omegas = omega_matrices(state, pair);
  const auto d = static_cast<Eigen::Index>(std::max(omegas.dim_x, omegas.dim_y));
  std::vector<CMatrix> padded;
  for (const auto& w : omegas.matrices) padded.push_back(pad(w, d, d));
  const auto& weights = omegas.weights.values();
  auto blocks = degenerate_blocks(weights);

  std::optional<IsometryPair> best;
  auto consider = [&](const CMatrix& U, const CMatrix& V) {
    IsometryPair cand{U, V, exchange_residual(omegas, U, V)};
    if (cand.residual >= config.tolerance) return;
    if (best && cand.residual >= best->residual) return;
    if (!verify_exchange_isometries(state, pair, cand, config.tolerance)) return;
    best = std::move(cand);
  };

  // Restart 0 is the identity pair; symmetric states need no search.
  consider(CMatrix::Identity(d, d), CMatrix::Identity(d, d));
  for (std::size_t k = 1; k <= config.restarts; ++k) {
    std::mt19937_64 rng(config.seed + k);
    // The condition is linear in Ω, so mixing inside a degenerate block keeps
    // the solution set; it only reshapes the least-squares landscape.
    std::vector<CMatrix> mixed = padded;
    for (auto [b, e] : blocks) {
      if (e - b < 2) continue;
      CMatrix w = haar_unitary(static_cast<Eigen::Index>(e - b), rng);
      for (std::size_t i = b; i < e; ++i) {
        mixed[i] = CMatrix::Zero(d, d);
        for (std::size_t j = b; j < e; ++j)
          mixed[i] += w(static_cast<Eigen::Index>(j - b), static_cast<Eigen::Index>(i - b)) * padded[j];
      }
    }
    auto run = alternate(mixed, weights, haar_unitary(d, rng), config.max_iterations, config.tolerance);
    consider(run.U, run.V);
  }
  return best;
}

bool necessary_condition(const PureState& state, ExchangePair pair) {
  auto g = pair_groups(state, pair);
  return same_spectrum(reduced_spectrum(state, g.x), reduced_spectrum(state, g.y), tol::kNorm);
}

std::optional<ExtendedOrder> renyi_witness(const Spectrum& p, const Spectrum& q) {
  constexpr double kEqual = 1e-12;
  constexpr double kSeparation = 1e-9;
  if (p.size() != q.size()) return ExtendedOrder::zero();
  if (same_spectrum(p, q, kEqual)) return std::nullopt;

  auto gap = [&](ExtendedOrder a) { return std::abs(renyi_entropy(p, a) - renyi_entropy(q, a)); };

  // Peel equal leading entries, renormalizing the tails, until the largest
  // remaining entries differ.
  std::vector<double> tp = p.values(), tq = q.values();
  std::size_t peeled = 0;
  while (!tp.empty() && std::abs(tp.front() - tq.front()) <= kEqual) {
    const double rest = 1.0 - tp.front();
    tp.erase(tp.begin());
    tq.erase(tq.begin());
    for (auto& v : tp) v /= rest;
    for (auto& v : tq) v /= rest;
    ++peeled;
  }
  if (peeled == 0 && gap(ExtendedOrder::infinity()) > kSeparation) return ExtendedOrder::infinity();

  // The tails differ at α = ∞, hence at every large enough finite α; the
  // peeled head dominates as α grows, so take the best moderate order.
  std::vector<ExtendedOrder> candidates;
  for (double a : {2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0, 0.5})
    candidates.push_back(ExtendedOrder::of(a));
  auto pick = [&](const std::vector<ExtendedOrder>& orders) {
    ExtendedOrder best = orders.front();
    double best_gap = -1;
    for (auto a : orders) {
      double g = gap(a);
      if (g > best_gap) {
        best = a;
        best_gap = g;
      }
    }
    return std::pair{best, best_gap};
  };
  auto [alpha, separation] = pick(candidates);
  if (separation > kSeparation) return alpha;
  auto [fallback, fallback_gap] = pick(alpha_grid(GridConfig{}));
  return fallback_gap > separation ? fallback : alpha;
}

std::string_view to_string(ZeroCostVerdict verdict) {
  switch (verdict) {
    case ZeroCostVerdict::Found: return "found";
    case ZeroCostVerdict::ImpossibleByBound: return "impossible-by-bound";
    case ZeroCostVerdict::Undetermined: return "undetermined";
  }
  return "?";
}

ZeroCostAssessment assess_zero_cost(const PureState& state, ExchangePair pair, const SolverConfig& config,
                                    const GridConfig& grid) {
  ZeroCostAssessment out;
  out.necessary_holds = necessary_condition(state, pair);
  out.pair_bound = bound_pair(state, pair, grid).bound_value;
  out.split_bound = bound_1_2(state, grid).report.bound_value;
  out.isometries = solve_exchange_isometries(state, pair, config);
  constexpr double kPositive = 1e-9;
  if (out.isometries) {
    out.verdict = ZeroCostVerdict::Found;
  } else if (!out.necessary_holds || out.pair_bound > kPositive ||
             (pair == ExchangePair::A1B1 && out.split_bound > kPositive)) {
    // Unassisted A1↔B1 costs at least the assisted cost, which bound_1_2 bounds.
    out.verdict = ZeroCostVerdict::ImpossibleByBound;
  } else {
    out.verdict = ZeroCostVerdict::Undetermined;
  }
  return out;
}

}  // namespace osqse
