#include "worm/levi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "worm/error.hpp"

namespace worm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int sign_class(double x, double band)
{
    return x > band ? 1 : (x < -band ? -1 : 0);
}

CMat raw_levi(const GradientHessian& gh, const CMat& basis)
{
    return basis.adjoint() * gh.H.transpose() * basis;
}

} // namespace

GradientHessian gradient_hessian(const FieldExpr& r, const CVec& point, const Bindings& bindings)
{
    const Jet2 j = eval_jet(r, point, bindings);
    return {j.value.real(), j.del, j.mixed};
}

GradientHessian gradient_hessian(const WormDomain& domain, const CVec& point)
{
    return gradient_hessian(domain.r, point, domain.bindings);
}

CMat levi_matrix(const GradientHessian& gh, int pivot)
{
    const CMat b = tangent_basis(gh.g, pivot);
    return raw_levi(gh, b) / gh.g.norm();
}

LeviSpectrum levi_spectrum(const GradientHessian& gh, int pivot)
{
    const CMat b = tangent_basis(gh.g, pivot);
    const HermitianEigen e = jacobi_eigen(raw_levi(gh, b) / gh.g.norm());
    return {e.values, b * e.vectors};
}

Eigen::VectorXd levi_spectrum(const WormDomain& domain, const BoundarySample& sample)
{
    return levi_spectrum(gradient_hessian(domain, sample.point())).values;
}

double null_alignment(const LeviSpectrum& s, int n, double zero_tol)
{
    double worst = 0.0;
    for (Eigen::Index k = 0; k < s.values.size(); ++k) {
        if (std::abs(s.values[k]) > zero_tol)
            continue;
        const CVec a = s.directions.col(k);
        const double fiber = a.tail(a.size() - n).norm();
        worst = std::max(worst, fiber / a.norm());
    }
    return worst;
}

LeviReport certify(const WormDomain& domain, std::span<const BoundarySample> samples,
                   const Tolerances& tol)
{
    LeviReport rep;
    rep.expected_zero_count = domain.n();
    rep.min_eigenvalue = rep.min_off_core = rep.min_on_core_positive = kInf;

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const BoundarySample& smp = samples[i];
        SampleVerdict v;
        v.index = i;
        const GradientHessian gh = gradient_hessian(domain, smp.point());
        rep.max_residual = std::max(rep.max_residual, std::abs(gh.value));
        if (gh.g.norm() < tol.cap_gradient) {
            v.cls = SampleClass::NearCap;
            ++rep.near_cap;
            rep.samples.push_back(std::move(v));
            continue;
        }
        ++rep.analysed;
        const LeviSpectrum spec = levi_spectrum(gh);
        v.eigenvalues = spec.values;
        const double lo = spec.values.size() ? spec.values[0] : kInf;
        rep.min_eigenvalue = std::min(rep.min_eigenvalue, lo);
        v.pseudoconvex = lo >= -tol.tol_psc;
        if (!v.pseudoconvex)
            rep.pseudoconvex_failures.push_back(i);

        if (smp.on_core) {
            v.cls = SampleClass::OnCore;
            ++rep.on_core;
            bool positive_rest = true;
            for (double x : spec.values) {
                if (std::abs(x) <= tol.zero_tol) {
                    ++v.zero_count;
                } else if (x > tol.zero_tol) {
                    rep.min_on_core_positive = std::min(rep.min_on_core_positive, x);
                } else {
                    positive_rest = false;
                }
            }
            v.alignment = null_alignment(spec, domain.n(), tol.zero_tol);
            rep.max_alignment = std::max(rep.max_alignment, v.alignment);
            if (v.zero_count != rep.expected_zero_count || !positive_rest)
                rep.zero_count_failures.push_back(i);
            v.pass = v.pseudoconvex && v.zero_count == rep.expected_zero_count && positive_rest;
        } else {
            v.cls = SampleClass::OffCore;
            ++rep.off_core;
            rep.min_off_core = std::min(rep.min_off_core, lo);
            v.strongly_pc = lo >= tol.strong_margin;
            if (!v.strongly_pc)
                rep.strong_failures.push_back(i);
            v.pass = v.pseudoconvex && v.strongly_pc;
        }
        rep.samples.push_back(std::move(v));
    }
    rep.pass = rep.analysed > 0 && rep.pseudoconvex_failures.empty() && rep.strong_failures.empty() &&
               rep.zero_count_failures.empty();
    return rep;
}

InvarianceResult defining_function_invariance_check(const WormDomain& domain, const FieldExpr& h,
                                                    std::span<const BoundarySample> samples,
                                                    double zero_tol)
{
    using namespace fx;
    const FieldExpr hv = h.vars() == domain.r.vars() ? h : relayout(h, domain.r.vars());
    const FieldExpr scaled = unary(NodeKind::Exp, unary(NodeKind::Re, hv)) * domain.r;

    InvarianceResult res;
    for (const BoundarySample& smp : samples) {
        const CVec p = smp.point();
        const GradientHessian a = gradient_hessian(domain.r, p, domain.bindings);
        if (a.g.norm() < domain.spec.tolerances.cap_gradient)
            continue;
        const GradientHessian b = gradient_hessian(scaled, p, domain.bindings);
        const double s = std::exp(eval_value(hv, p, domain.bindings).real());

        const CMat basis = tangent_basis(a.g);
        const CMat m = raw_levi(a, basis);
        const CMat m2 = raw_levi(b, basis);
        // On the core the Levi matrix can vanish; the ambient Hessian sets the scale there.
        const double denom = std::max(s * std::max(m.norm(), a.H.norm()), std::numeric_limits<double>::min());
        res.max_matrix_discrepancy = std::max(res.max_matrix_discrepancy, (m2 - s * m).norm() / denom);

        const Eigen::VectorXd e = jacobi_eigen(m).values;
        const Eigen::VectorXd e2 = jacobi_eigen(m2).values;
        const double scale = denom;
        res.max_spectrum_discrepancy =
            std::max(res.max_spectrum_discrepancy, (e2 - s * e).cwiseAbs().maxCoeff() / scale);

        const double g1 = a.g.norm();
        const double g2 = b.g.norm();
        for (Eigen::Index k = 0; k < e.size(); ++k)
            if (sign_class(e[k] / g1, zero_tol) != sign_class(e2[k] / g2, zero_tol))
                ++res.sign_mismatches;
        ++res.checked;
    }
    return res;
}

} // namespace worm
