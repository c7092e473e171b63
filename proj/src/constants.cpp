#include "worm/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "worm/error.hpp"
#include "worm/hermitian.hpp"

namespace worm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lambda_min(const CMat& m)
{
    return jacobi_eigen(m).values[0];
}

// Q^{-1/2} for Q = I + x x^*.
CMat inverse_sqrt_rank_one(const CVec& x)
{
    const Eigen::Index n = x.size();
    CMat q = CMat::Identity(n, n);
    const double s = x.squaredNorm();
    if (s > 0.0)
        q += (1.0 / std::sqrt(1.0 + s) - 1.0) * (x * x.adjoint()) / s;
    return q;
}

} // namespace

Lemma1Constants lemma1_constants(const FieldExpr& sigma, std::span<const CVec> grid, const Bindings& bindings)
{
    if (grid.empty())
        throw ConfigError("lemma 1 constants: empty grid");
    Lemma1Constants k;
    double c = kInf;
    double C = 0.0;
    for (const CVec& z : grid) {
        const Jet2 j = eval_jet(sigma, z, bindings);
        const int n = static_cast<int>(z.size());
        c = std::min(c, lambda_min(j.mixed.topLeftCorner(n, n)));
        C = std::max({C, j.del.head(n).norm(), -j.value.real()});
    }
    k.points = grid.size();
    k.c_raw = c;
    k.C_raw = C;
    if (!(c > 0.0))
        throw ConfigError("sigma is not strictly plurisubharmonic on the grid (min eigenvalue " +
                          std::to_string(c) + ")");
    k.c = 0.9 * c;
    k.C = 1.1 * C;
    return k;
}

double k_threshold(double c, double C)
{
    return 1.05 * (C + C * C / c);
}

Lemma2Constants lemma2_constant(const FieldExpr& d_def, const FieldExpr& u, std::span<const CVec> grid,
                                const Bindings& bindings)
{
    Lemma2Constants k;
    double c = kInf;
    for (const CVec& z : grid) {
        const int n = static_cast<int>(z.size());
        const Jet2 jd = eval_jet(d_def, z, bindings);
        const double d = jd.value.real();
        if (d < 0.0 || d > 0.25)
            continue;
        const Jet2 ju = eval_jet(u, z, bindings);
        const CVec v = cplx(0.0, -1.0) * ju.del.head(n);
        const CMat p = inverse_sqrt_rank_one(v.conjugate());
        const CMat h = jd.mixed.topLeftCorner(n, n).transpose();
        c = std::min(c, lambda_min(p * h * p));
        ++k.points;
    }
    if (k.points == 0)
        throw ConfigError("lemma 2 constant: no grid point with 0 <= d <= 1/4");
    if (!(c > 0.0))
        throw ConfigError("d_def is not strictly plurisubharmonic near the boundary of Y (c = " +
                          std::to_string(c) + ")");
    k.c = c;
    k.eps0 = eps0_from_c(c);
    return k;
}

double eps0_from_c(double c)
{
    return std::min(0.25, std::sqrt(c));
}

double k_precompact(double eps0)
{
    if (!(eps0 > 0.0))
        throw ConfigError("eps0 must be positive");
    return std::exp(1.0 / eps0);
}

RegularValueResult regular_value_check(const WormDomain& domain, std::span<const CVec> grid, double delta,
                                       double tol)
{
    using namespace fx;
    const FieldExpr g = domain.R - domain.eta;
    RegularValueResult res;
    res.margin = kInf;
    for (const CVec& z : grid) {
        Jet2 j;
        try {
            j = eval_jet(g, z, domain.bindings);
        } catch (const DomainError&) {
            continue;
        }
        if (!(std::abs(j.value.real()) < delta))
            continue;
        ++res.near_points;
        res.margin = std::min(res.margin, 2.0 * j.del.head(z.size()).norm());
    }
    res.pass = res.margin >= tol;
    return res;
}

ConstantBudget select_K(const WormSpec& spec)
{
    const GeneralFields f = parse_general_fields(spec);
    const Bindings b = spec.bindings();
    const ConstantSettings& cs = spec.constants;
    if (cs.grid_points < 2 || cs.max_attempts < 1 || !(cs.step_fraction > 0.0))
        throw ConfigError("constants: bad search settings");

    ConstantBudget bud;
    bud.grid_points = cs.grid_points;
    bud.level_grid_points = cs.level_grid_points > 0 ? cs.level_grid_points : cs.grid_points;
    const auto grid = spec.base_domain.with_resolution(bud.grid_points).grid(spec.n);
    const auto level_grid = bud.level_grid_points == bud.grid_points
                                ? grid
                                : spec.base_domain.with_resolution(bud.level_grid_points).grid(spec.n);

    bud.lemma1 = lemma1_constants(f.sigma, grid, b);
    bud.K_L = k_threshold(bud.lemma1.c, bud.lemma1.C);
    bud.lemma2 = lemma2_constant(f.d_def, f.u, grid, b);
    bud.K_precompact = k_precompact(bud.lemma2.eps0);
    bud.K_lower = 1.01 * std::max({bud.K_L, bud.K_precompact, bud.lemma1.C});
    bud.K_start = std::max(bud.K_lower, cs.k_start.value_or(0.0));
    bud.K_step = cs.step_fraction * bud.K_start;

    for (int a = 0; a < cs.max_attempts; ++a) {
        const double K = bud.K_start + a * bud.K_step;
        const WormDomain dom = build_general_worm(spec, K);
        double max_r = 0.0;
        for (const CVec& z : level_grid) {
            try {
                max_r = std::max(max_r, eval_real(dom.R, z, dom.bindings));
            } catch (const DomainError&) {
            }
        }
        const double delta = cs.level_delta * max_r;
        const double tol = cs.level_tol * max_r;
        const RegularValueResult rv = regular_value_check(dom, level_grid, delta, tol);
        bud.attempts.push_back({K, rv.margin, rv.near_points, rv.pass});
        if (rv.pass) {
            bud.found = true;
            bud.K_selected = K;
            bud.regular_value_margin = rv.margin;
            bud.level_delta = delta;
            bud.level_tol = tol;
            bud.max_R = max_r;
            break;
        }
    }
    return bud;
}

ResolvedWorm build_worm(const WormSpec& spec, bool with_budget)
{
    spec.validate();
    if (spec.kind == WormKind::DiederichFornaess)
        return {build_df_worm(spec), std::nullopt};
    if (spec.K && !with_budget)
        return {build_general_worm(spec, *spec.K), std::nullopt};
    ConstantBudget bud = select_K(spec);
    if (!spec.K && !bud.found)
        throw NumericalError("K search exhausted after " + std::to_string(bud.attempts.size()) + " attempts");
    const double K = spec.K ? *spec.K : bud.K_selected;
    return {build_general_worm(spec, K), std::move(bud)};
}

OracleResult lemma1_oracle(const FieldExpr& sigma, const FieldExpr& G, double K, int codim,
                           std::span<const CVec> points, const Bindings& bindings)
{
    using namespace fx;
    const Variables v{sigma.vars().n, codim, false};
    FieldExpr w2 = unary(NodeKind::Abs2, coord('w', 1, v));
    for (int j = 2; j <= codim; ++j)
        w2 = w2 + unary(NodeKind::Abs2, coord('w', j, v));
    const FieldExpr g = relayout(G, v);
    const FieldExpr f = (relayout(sigma, v) + literal(K, v)) * unary(NodeKind::Abs2, g) * w2;

    OracleResult res;
    res.min_eigenvalue = kInf;
    for (const CVec& p : points) {
        if (std::abs(eval_value(g, p, bindings)) == 0.0)
            throw ConfigError("G vanishes at a sample point");
        const double lo = lambda_min(eval_jet(f, p, bindings).mixed);
        if (lo < res.min_eigenvalue) {
            res.min_eigenvalue = lo;
            res.argmin = p;
        }
        ++res.points;
    }
    return res;
}

Lemma2OracleResult lemma2_oracle(const FieldExpr& u, const FieldExpr& d_def, std::span<const CVec> grid,
                                 double d_max, const Bindings& bindings, double d_min)
{
    Lemma2OracleResult res;
    res.min_eigenvalue = res.min_normalized = kInf;
    for (const CVec& z : grid) {
        const int n = static_cast<int>(z.size());
        Jet2 jd = eval_jet(d_def, z, bindings);
        const double d = jd.value.real();
        if (!(d > d_min && d < d_max))
            continue;
        const Jet2 ju = eval_jet(u, z, bindings);
        Jet2 v(n);
        v.value = 0.0;
        v.del = cplx(0.0, -1.0) * ju.del.head(n);
        v.delbar = v.del.conjugate();
        v.mixed.setZero();
        Jet2 base(n);
        base.value = jd.value;
        base.del = jd.del.head(n);
        base.delbar = jd.delbar.head(n);
        base.mixed = jd.mixed.topLeftCorner(n, n);
        const Jet2 f = exp_c(v) * compose_real(base, theta);
        const double lo = lambda_min(f.mixed);
        res.min_eigenvalue = std::min(res.min_eigenvalue, lo);
        res.min_normalized = std::min(res.min_normalized, lo / std::exp(-1.0 / d));
        ++res.points;
    }
    return res;
}

} // namespace worm
