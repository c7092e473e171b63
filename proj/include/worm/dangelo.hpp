#pragma once

// The D'Angelo form along the core Y x {0} and its periods over loops in Y.

#include <optional>
#include <string>

#include "worm/geometry.hpp"
#include "worm/levi.hpp"

namespace worm {

/// N = conj(dr) / |dr|^2, so that N r = 1.  Throws DomainError when |dr| <= 1e-12.
CVec normal_field(const GradientHessian& gh);
CVec normal_field(const WormDomain& domain, const CVec& point);

/// alpha(Z) = 2 sum_jk H_jk Z_j conj(N_k) at (z, 0), for a base vector Z in C^n.
/// Throws DomainError unless eta(z) <= core_eta.
cplx dangelo_eval(const WormDomain& domain, const CVec& z, const CVec& Z);

/// alpha_j = alpha(d/dz_j), j = 1..n.
CVec dangelo_coefficients(const WormDomain& domain, const CVec& z);

/// iota^* alpha (v) = 2 Re(sum_j alpha_j v_j), with v given by its (1,0)
/// components v_j = dz_j(v).
double restricted_form(const WormDomain& domain, const CVec& z, const CVec& v);

/// 2 d^c u (v) = 2i (du - dbar u)(v) from the jet of u.  The imaginary part is
/// zero up to rounding.
cplx dcu_oracle(const WormDomain& domain, const CVec& z, const CVec& v);

struct PeriodReport {
    std::string name;
    int winding = 1;
    int segments = 0;
    CVec centroid;            ///< mean of the quadrature nodes
    double mean_radius = 0.0; ///< mean distance of the nodes from the centroid
    double integrated = 0.0;
    double oracle = 0.0;
    std::optional<double> expected;
    double oracle_discrepancy = 0.0;
    std::optional<double> expected_discrepancy;
    double max_imag_residual = 0.0; ///< largest |Im| of the oracle integrand
    double max_eta = 0.0;           ///< largest eta met along the loop
    bool pass = false;
};

/// Composite Simpson rule on s in [0, 2 pi winding] with `segments` intervals.
/// Throws DomainError if the loop leaves Y (eta > core_eta at a node) and
/// ConfigError for fewer than 16 or an odd number of segments.
PeriodReport period(const WormDomain& domain, const LoopSpec& loop, int segments);
PeriodReport period(const WormDomain& domain, const LoopSpec& loop);

/// |period(a) - period(b)|.
double homotopy_invariance(const WormDomain& domain, const LoopSpec& a, const LoopSpec& b, int segments);

/// Closed-form period of 2 d^c u for u = c log|z_k|^2 (-8 pi c times the winding
/// of z_k about 0) and u = c, c Re z_k, c Im z_k (zero).  Empty otherwise.
std::optional<double> closed_form_period(const WormDomain& domain, const LoopSpec& loop, int segments);

} // namespace worm
