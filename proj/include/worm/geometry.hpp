#pragma once

// Defining functions of worm domains and boundary sampling.
//
// Every domain here is of the form
//   r = R^{-1} |w|^2 - 2 Re(w_1 e^{-iu}) + eta
// over a base in C^n with fibers in C^d: the fiber over z is the open ball of
// center (R e^{iu}, 0') and radius sqrt(R (R - eta)).  The Diederich-Fornaess
// worm is the case n = d = 1, R = 1, eta = chi(log|z|), u = t log|z|^2.

#include <cstddef>
#include <span>
#include <vector>

#include "worm/expr.hpp"
#include "worm/spec.hpp"

namespace worm {

struct WormDomain {
    WormSpec spec;
    double K = 0.0;    ///< resolved constant (general worms)
    Bindings bindings; ///< spec bindings plus K
    FieldExpr u;       ///< base fields, declared over (n, codim)
    FieldExpr R;
    FieldExpr eta;
    FieldExpr sigma; ///< general worms only
    FieldExpr d_def; ///< general worms only
    FieldExpr r;     ///< global defining function in n + codim variables

    int n() const noexcept { return spec.n; }
    int codim() const noexcept { return spec.codim; }
    int dim() const noexcept { return spec.n + spec.codim; }
};

struct BaseValues {
    double u = 0.0;
    double R = 0.0;
    double eta = 0.0;
};

struct FiberGeometry {
    CVec center;
    double radius = 0.0;
};

struct BoundarySample {
    CVec z;
    CVec w;
    double residual = 0.0; ///< r(z, w)
    double scale = 0.0;    ///< |dr| (Wirtinger gradient norm)
    double eta = 0.0;
    bool on_core = false;
    std::size_t base_index = 0;
    int direction = 0;

    CVec point() const;
};

struct SampleSet {
    std::vector<BoundarySample> samples;
    std::size_t base_points = 0;
    std::size_t skipped = 0; ///< base points outside {eta < R} or outside the fields' domain
};

/// Throws ConfigError when t == 0 or chi is invalid.
WormDomain build_df_worm(double t, const ChiParams& chi, const BaseDomain& base = {});
WormDomain build_df_worm(const WormSpec& spec);

struct GeneralFields {
    FieldExpr u;
    FieldExpr sigma;
    FieldExpr d_def;
};

/// Parses u, sigma and d_def, checks reality, base-only dependence and the
/// pluriharmonicity probe on u (64 points, |mixed Hessian| <= 1e-9).
GeneralFields parse_general_fields(const WormSpec& spec);

/// r = (sigma + K)|w|^2 - 2 Re(w1 e^{-iu}) + theta(d_def).  Uses spec.K; throws
/// ConfigError if K is "auto" (see build_worm in constants.hpp).
WormDomain build_general_worm(const WormSpec& spec);
WormDomain build_general_worm(const WormSpec& spec, double K);

/// The other written form R^{-1}|w1 - R e^{iu}|^2 + R^{-1}|w'|^2 + eta - R.
FieldExpr centered_form(const WormDomain& domain);

BaseValues base_values(const WormDomain& domain, const CVec& z);

/// Throws DomainError when eta(z) >= R(z).
FiberGeometry fiber_geometry(const WormDomain& domain, const CVec& z);

/// Low-discrepancy points on the unit sphere of C^d.  The first point is e_1;
/// d = 1 uses equally spaced angles, d >= 2 a Halton sequence mapped through
/// Dirichlet stick-breaking of |xi_j|^2 and uniform phases.
std::vector<CVec> sphere_directions(int d, int count);

/// For each base point, `sphere_count` fiber points center + radius * U xi_k,
/// where U = diag(-e^{iu}, 1, ..., 1) rotates xi_0 = e_1 onto the direction of
/// the fiber ball that touches w = 0 when eta vanishes.
SampleSet sample_boundary(const WormDomain& domain, std::span<const CVec> base_grid,
                          int sphere_count);

} // namespace worm
