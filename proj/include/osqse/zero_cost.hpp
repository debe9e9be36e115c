#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "osqse/entropy.hpp"
#include "osqse/state.hpp"

namespace osqse {

/// Eigen-decomposition of ρ_XY with each eigenvector |ξ_i> reshaped into a
/// dim(X) × dim(Y) matrix, [Ω^i]_jk = (<j|_X <k|_Y)|ξ_i>.
struct OmegaSet {
  std::vector<CMatrix> matrices;
  Spectrum weights;
  ExchangePair pair = ExchangePair::AB;
  std::size_t dim_x = 1;
  std::size_t dim_y = 1;
};

/// Candidate local operations: Alice applies U on X, Bob applies Vᵗ on Y.
struct IsometryPair {
  CMatrix U;
  CMatrix V;
  double residual = 0;  // max_i ||(Ω^i)ᵗ - U Ω^i V||_F
};

/// Eigenvalues of ρ_XY closer than this (relative to the largest) are
/// treated as one degenerate block.
inline constexpr double kDegeneracyTolerance = 1e-9;

/// Ω matrices for the pair's (X, Y) = (A1, B1) or (A, B). Bases inside
/// degenerate eigenspaces are fixed deterministically: Gram-Schmidt of the
/// projected computational basis vectors, first large entry real positive.
OmegaSet omega_matrices(const PureState& state, ExchangePair pair);

/// max_i ||pad((Ω^i)ᵗ) - U pad(Ω^i) V||_F. U is dY×dX (or square, padded
/// to max(dX, dY)), V likewise.
double exchange_residual(const OmegaSet& omegas, const CMatrix& U, const CMatrix& V);

/// True iff (U ⊗ Vᵗ) maps the state onto its X↔Y-exchanged version within
/// `tolerance`, up to a global phase. Throws DimensionMismatch on bad shapes
/// and NotIsometryError when U or V lacks orthonormal columns.
bool verify_exchange_isometries(const PureState& state, ExchangePair pair, const IsometryPair& candidate,
                                double tolerance = 1e-8);

struct SolverConfig {
  std::size_t restarts = 32;
  std::size_t max_iterations = 500;
  double tolerance = 1e-8;
  std::uint64_t seed = 20200101;
};

/// Searches for U, V with (Ω^i)ᵗ = U Ω^i V by alternating orthogonal
/// Procrustes updates from random unitary starts. Returns the minimum-residual
/// pair among restarts that pass verification; nullopt means "not found",
/// which does not prove nonexistence.
std::optional<IsometryPair> solve_exchange_isometries(const PureState& state, ExchangePair pair,
                                                      const SolverConfig& config = {});

/// Equal spectra of ρ_X and ρ_Y elementwise within 1e-9.
bool necessary_condition(const PureState& state, ExchangePair pair);

/// An order α with |H_α(p) - H_α(q)| > 1e-9, or nullopt when the sorted
/// spectra agree. Rank mismatch gives α = 0, differing largest entries give
/// α = ∞; otherwise equal leading entries are peeled off and the tails
/// renormalized until they differ.
std::optional<ExtendedOrder> renyi_witness(const Spectrum& p, const Spectrum& q);

enum class ZeroCostVerdict { Found, ImpossibleByBound, Undetermined };

std::string_view to_string(ZeroCostVerdict verdict);

struct ZeroCostAssessment {
  ZeroCostVerdict verdict = ZeroCostVerdict::Undetermined;
  std::optional<IsometryPair> isometries;
  bool necessary_holds = false;
  double pair_bound = 0;   // max_α |S_α(X) - S_α(Y)|
  double split_bound = 0;  // bound_1_2, also a lower bound for A1↔B1 without assistance
};

/// Runs the solver and classifies the outcome: found, impossible (a converse
/// bound is positive or the spectra differ), or undetermined.
ZeroCostAssessment assess_zero_cost(const PureState& state, ExchangePair pair, const SolverConfig& config = {},
                                    const GridConfig& grid = {});

}  // namespace osqse
