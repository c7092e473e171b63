#pragma once

// Levi form of a worm boundary at sampled points, its spectrum and the
// pseudoconvexity verdicts built on it.

#include <cstddef>
#include <span>
#include <vector>

#include "worm/geometry.hpp"
#include "worm/hermitian.hpp"

namespace worm {

struct GradientHessian {
    double value = 0.0;
    CVec g; ///< dr/dzeta_j
    CMat H; ///< d^2 r / dzeta_j dzetabar_k
};

GradientHessian gradient_hessian(const FieldExpr& r, const CVec& point, const Bindings& bindings);
GradientHessian gradient_hessian(const WormDomain& domain, const CVec& point);

/// The Levi form on {sum g_j a_j = 0} in the tangent basis B, divided by |g|:
/// a^* M a = sum_jk H_jk a_j conj(a_k) / |g| for a = B c.
CMat levi_matrix(const GradientHessian& gh, int pivot = 0);

struct LeviSpectrum {
    Eigen::VectorXd values; ///< ascending, normalized by |g|
    CMat directions;        ///< ambient tangent vectors B c_k, one per column
};

LeviSpectrum levi_spectrum(const GradientHessian& gh, int pivot = 0);
Eigen::VectorXd levi_spectrum(const WormDomain& domain, const BoundarySample& sample);

/// Largest sine of the angle between a zero-band direction and the base
/// subspace C^n x {0}.  Zero when no eigenvalue is in the band.
double null_alignment(const LeviSpectrum& spectrum, int n, double zero_tol);

enum class SampleClass { OnCore, OffCore, NearCap };

struct SampleVerdict {
    std::size_t index = 0;
    SampleClass cls = SampleClass::OffCore;
    Eigen::VectorXd eigenvalues; ///< empty for near-cap samples
    bool pseudoconvex = true;
    bool strongly_pc = true; ///< off-core only
    int zero_count = 0;      ///< on-core only
    double alignment = 0.0;  ///< on-core only
    bool pass = true;
};

struct LeviReport {
    std::vector<SampleVerdict> samples;
    std::size_t analysed = 0;
    std::size_t on_core = 0;
    std::size_t off_core = 0;
    std::size_t near_cap = 0;
    int expected_zero_count = 0;
    double min_eigenvalue = 0.0;
    double min_off_core = 0.0;
    double min_on_core_positive = 0.0; ///< smallest eigenvalue above the zero band at on-core samples
    double max_alignment = 0.0;
    double max_residual = 0.0;
    std::vector<std::size_t> pseudoconvex_failures;
    std::vector<std::size_t> strong_failures;
    std::vector<std::size_t> zero_count_failures;
    bool pass = false;
};

/// On-core samples must have exactly n eigenvalues in [-zero_tol, zero_tol] and
/// the rest above it; off-core samples need min eigenvalue >= strong_margin; all
/// need min eigenvalue >= -tol_psc.  Samples with |dr| < cap_gradient are
/// counted as near-cap and skipped.
LeviReport certify(const WormDomain& domain, std::span<const BoundarySample> samples,
                   const Tolerances& tol);

struct InvarianceResult {
    std::size_t checked = 0;
    double max_matrix_discrepancy = 0.0;   ///< |M' - s M| / (s max(|M|, |H|)), unnormalized matrices
    double max_spectrum_discrepancy = 0.0; ///< same for the eigenvalue lists
    std::size_t sign_mismatches = 0;
};

/// Compares the Levi form of r with that of e^{Re h} r, h holomorphic.
InvarianceResult defining_function_invariance_check(const WormDomain& domain, const FieldExpr& h,
                                                    std::span<const BoundarySample> samples,
                                                    double zero_tol = 1e-7);

} // namespace worm
