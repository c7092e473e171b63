#pragma once

// Constants of the construction: the plurisubharmonicity moduli of sigma and
// d_def, the resulting lower bounds for K, the search for a K whose level set
// is regular, and brute-force checks of the two lemmas the bounds come from.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "worm/geometry.hpp"

namespace worm {

struct Lemma1Constants {
    double c = 0.0;     ///< 0.9 * min lambda_min(Hess sigma)
    double C = 0.0;     ///< 1.1 * max(sup |d sigma|, sup max(0, -sigma))
    double c_raw = 0.0; ///< before the safety factors
    double C_raw = 0.0;
    std::size_t points = 0;
};

/// Throws ConfigError when sigma is not strictly psh on the grid.
Lemma1Constants lemma1_constants(const FieldExpr& sigma, std::span<const CVec> grid,
                                 const Bindings& bindings = {});

/// 1.05 (C + C^2 / c).
double k_threshold(double c, double C);

struct Lemma2Constants {
    double c = 0.0; ///< min lambda_min(Q^{-1/2} Hess(d)^T Q^{-1/2}), Q = I + conj(v) v^T
    double eps0 = 0.0;
    std::size_t points = 0; ///< grid points with 0 <= d <= 1/4
};

/// v_j = -i du/dz_j.  Only grid points with 0 <= d <= 1/4 enter the minimum.
/// Throws ConfigError when no point qualifies or c <= 0.
Lemma2Constants lemma2_constant(const FieldExpr& d_def, const FieldExpr& u, std::span<const CVec> grid,
                                const Bindings& bindings = {});

/// min(1/4, sqrt(c)).
double eps0_from_c(double c);

/// e^{1/eps0}.
double k_precompact(double eps0);

struct RegularValueResult {
    bool pass = true;
    double margin = 0.0; ///< +inf when no grid point is near the level
    std::size_t near_points = 0;
};

/// Minimum of the Euclidean gradient norm 2|d(R - eta)| over grid points with
/// |R - eta| < delta; passes when that minimum is >= tol.
RegularValueResult regular_value_check(const WormDomain& domain, std::span<const CVec> grid, double delta,
                                       double tol);

struct KAttempt {
    double K = 0.0;
    double margin = 0.0;
    std::size_t near_points = 0;
    bool pass = false;
};

struct ConstantBudget {
    Lemma1Constants lemma1;
    double K_L = 0.0;
    Lemma2Constants lemma2;
    double K_precompact = 0.0;
    double K_lower = 0.0; ///< 1.01 * max(K_L, K_precompact, C)
    double K_start = 0.0;
    double K_step = 0.0;
    double K_selected = 0.0;
    double regular_value_margin = 0.0;
    double level_delta = 0.0; ///< absolute
    double level_tol = 0.0;   ///< absolute
    double max_R = 0.0;
    int grid_points = 0;
    int level_grid_points = 0;
    std::vector<KAttempt> attempts;
    bool found = false;
};

/// Lemma constants from spec.constants.grid_points, then K = start, start + step,
/// ... until the regular-value check passes or max_attempts is reached.
ConstantBudget select_K(const WormSpec& spec);

struct ResolvedWorm {
    WormDomain domain;
    std::optional<ConstantBudget> budget;
};

/// Diederich-Fornaess worms are built directly.  General worms use spec.K when
/// set and select_K otherwise; `with_budget` forces the budget computation.
/// Throws NumericalError when the K search is exhausted.
ResolvedWorm build_worm(const WormSpec& spec, bool with_budget = false);

struct OracleResult {
    double min_eigenvalue = 0.0;
    CVec argmin;
    std::size_t points = 0;
};

/// Minimum eigenvalue of the mixed Hessian of (sigma + K)|G|^2|w|^2 at the
/// given points of C^(n+d).  sigma and G are base fields.
OracleResult lemma1_oracle(const FieldExpr& sigma, const FieldExpr& G, double K, int codim,
                           std::span<const CVec> points, const Bindings& bindings = {});

struct Lemma2OracleResult {
    double min_eigenvalue = 0.0;            ///< of the mixed Hessian of e^v theta(d), v(z) = 0
    double min_normalized = 0.0;            ///< same, divided by e^{v - 1/d}
    std::size_t points = 0;                 ///< grid points with d_min < d < d_max
};

/// The Hessian is assembled from jets with v = 0, dv/dz_j = -i du/dz_j and zero
/// mixed part at each point (a local pluriharmonic conjugate).
Lemma2OracleResult lemma2_oracle(const FieldExpr& u, const FieldExpr& d_def, std::span<const CVec> grid,
                                 double d_max, const Bindings& bindings = {}, double d_min = 0.0);

} // namespace worm
