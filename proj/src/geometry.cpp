#include "worm/geometry.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "worm/error.hpp"

namespace worm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double lattice(double lo, double hi, int count, int i)
{
    return count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
}

// All lattice points of a box in R^(2k), last coordinate fastest.
std::vector<std::vector<double>> box_lattice(const std::vector<double>& lo,
                                             const std::vector<double>& hi, int count)
{
    std::vector<std::vector<double>> out{{}};
    for (std::size_t axis = 0; axis < lo.size(); ++axis) {
        std::vector<std::vector<double>> next;
        next.reserve(out.size() * count);
        for (const auto& prefix : out)
            for (int i = 0; i < count; ++i) {
                auto p = prefix;
                p.push_back(lattice(lo[axis], hi[axis], count, i));
                next.push_back(std::move(p));
            }
        out = std::move(next);
    }
    return out;
}

double radical_inverse(unsigned long long k, unsigned base)
{
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (k > 0) {
        r += f * static_cast<double>(k % base);
        k /= base;
        f *= inv;
    }
    return r;
}

constexpr std::array<unsigned, 16> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

} // namespace

BaseDomain BaseDomain::with_resolution(int per_dim) const
{
    BaseDomain b = *this;
    b.radial = b.angular = b.points = per_dim;
    return b;
}

void BaseDomain::validate(int n) const
{
    const std::size_t box_dims = kind == Kind::Box ? 2 * n : 2 * (n - 1);
    if (lo.size() != box_dims || hi.size() != box_dims)
        throw ConfigError("base_domain: expected " + std::to_string(box_dims) + " box bounds");
    for (std::size_t i = 0; i < box_dims; ++i)
        if (!(lo[i] <= hi[i]))
            throw ConfigError("base_domain: lo must not exceed hi");
    if (kind == Kind::Annulus && !(log_r_min < log_r_max))
        throw ConfigError("base_domain: log_r must be an increasing pair");
    if (points < 1 || radial < 1 || angular < 1)
        throw ConfigError("base_domain: grid counts must be positive");
}

std::vector<CVec> BaseDomain::grid(int n) const
{
    validate(n);
    std::vector<CVec> out;
    if (kind == Kind::Box) {
        for (const auto& p : box_lattice(lo, hi, points)) {
            CVec z(n);
            for (int j = 0; j < n; ++j)
                z[j] = cplx(p[2 * j], p[2 * j + 1]);
            out.push_back(std::move(z));
        }
        return out;
    }
    const auto rest = box_lattice(lo, hi, points);
    for (int i = 0; i < radial; ++i) {
        const double rho = std::exp(lattice(log_r_min, log_r_max, radial, i));
        for (int k = 0; k < angular; ++k) {
            const cplx z1 = std::polar(rho, kTwoPi * k / angular);
            for (const auto& p : rest) {
                CVec z(n);
                z[0] = z1;
                for (int j = 1; j < n; ++j)
                    z[j] = cplx(p[2 * (j - 1)], p[2 * (j - 1) + 1]);
                out.push_back(std::move(z));
            }
        }
    }
    return out;
}

CVec BaseDomain::random_point(int n, std::mt19937_64& rng) const
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    CVec z(n);
    int first_box = 0;
    if (kind == Kind::Annulus) {
        const double rho = std::exp(log_r_min + (log_r_max - log_r_min) * unit(rng));
        z[0] = std::polar(rho, kTwoPi * unit(rng));
        first_box = 1;
    }
    for (int j = first_box; j < n; ++j) {
        const std::size_t a = 2 * (j - first_box);
        const double x = lo[a] + (hi[a] - lo[a]) * unit(rng);
        const double y = lo[a + 1] + (hi[a + 1] - lo[a + 1]) * unit(rng);
        z[j] = cplx(x, y);
    }
    return z;
}

Bindings WormSpec::bindings() const
{
    Bindings b = params;
    b["t"] = t;
    return b;
}

void WormSpec::validate() const
{
    if (n < 1)
        throw ConfigError("n must be >= 1");
    if (codim < 1)
        throw ConfigError("codim must be >= 1");
    if (K && !(*K > 0.0))
        throw ConfigError("K must be positive");
    for (const auto& [name, value] : params)
        if (name == "t" || name == "K" || name == "i" || name == "pi" || name == "s")
            throw ConfigError("parameter name '" + name + "' is reserved");
    if (kind == WormKind::DiederichFornaess) {
        if (n != 1 || codim != 1)
            throw ConfigError("the Diederich-Fornaess worm has n = codim = 1");
        if (!chi)
            throw ConfigError("the Diederich-Fornaess worm requires chi parameters");
        if (t == 0.0)
            throw ConfigError("t must be nonzero");
        chi->validate();
    } else if (sigma.empty() || d_def.empty()) {
        throw ConfigError("general worms require sigma and d_def");
    }
    base_domain.validate(n);
    if (sampling.sphere < 1)
        throw ConfigError("sphere count must be >= 1");
    for (const auto& loop : loops) {
        if (static_cast<int>(loop.z.size()) != n)
            throw ConfigError("loop '" + loop.name + "' must give one expression per base coordinate");
        if (loop.segments < 16 || loop.segments % 2 != 0)
            throw ConfigError("loop '" + loop.name + "': segments must be even and >= 16");
        if (loop.winding == 0)
            throw ConfigError("loop '" + loop.name + "': winding must be nonzero");
    }
}

CVec BoundarySample::point() const
{
    CVec p(z.size() + w.size());
    p << z, w;
    return p;
}

WormDomain build_df_worm(double t, const ChiParams& chi, const BaseDomain& base)
{
    WormSpec spec;
    spec.kind = WormKind::DiederichFornaess;
    spec.n = 1;
    spec.codim = 1;
    spec.t = t;
    spec.chi = chi;
    spec.base_domain = base;
    if (base.kind == BaseDomain::Kind::Box && base.lo.empty()) {
        spec.base_domain.kind = BaseDomain::Kind::Annulus;
        spec.base_domain.log_r_min = chi.a1;
        spec.base_domain.log_r_max = chi.b2;
    }
    return build_df_worm(spec);
}

WormDomain build_df_worm(const WormSpec& spec_in)
{
    WormSpec spec = spec_in;
    spec.kind = WormKind::DiederichFornaess;
    spec.u = "t*log_abs2(z1)";
    spec.validate();

    using namespace fx;
    const Variables v = spec.vars();
    const FieldExpr z1 = coord('z', 1, v);
    const FieldExpr w1 = coord('w', 1, v);
    const FieldExpr log_z = unary(NodeKind::LogAbs2, z1);

    WormDomain dom;
    dom.spec = spec;
    dom.bindings = spec.bindings();
    dom.u = param("t", v) * log_z;
    dom.R = literal(1.0, v);
    dom.eta = fx::chi(log_z / literal(2.0, v), *spec.chi);
    dom.r = unary(NodeKind::Abs2, w1 - unary(NodeKind::Exp, imag_unit(v) * dom.u)) - literal(1.0, v) +
            dom.eta;
    return dom;
}

GeneralFields parse_general_fields(const WormSpec& spec)
{
    spec.validate();
    const Variables v = spec.vars();
    const Bindings b = spec.bindings();
    GeneralFields f{parse_real(spec.u, v, b), parse_real(spec.sigma, v, b), parse_real(spec.d_def, v, b)};
    for (const auto* e : {&f.u, &f.sigma, &f.d_def})
        if (e->uses_fiber())
            throw ConfigError("field '" + to_string(*e) + "' must depend on base coordinates only");

    std::mt19937_64 rng(0x9a3f17ULL);
    int probed = 0;
    for (int k = 0; k < 64; ++k) {
        const CVec z = spec.base_domain.random_point(spec.n, rng);
        Jet2 j;
        try {
            j = eval_jet(f.u, z, b);
        } catch (const DomainError&) {
            continue;
        }
        ++probed;
        if (j.mixed.cwiseAbs().maxCoeff() > 1e-9)
            throw ConfigError("u = " + to_string(f.u) + " is not pluriharmonic");
    }
    if (probed == 0)
        throw ConfigError("u could not be evaluated on the base domain");
    return f;
}

WormDomain build_general_worm(const WormSpec& spec)
{
    if (!spec.K)
        throw ConfigError("K is \"auto\": resolve it with the constant selection first");
    return build_general_worm(spec, *spec.K);
}

WormDomain build_general_worm(const WormSpec& spec_in, double K)
{
    if (!(K > 0.0))
        throw ConfigError("K must be positive");
    WormSpec spec = spec_in;
    spec.kind = WormKind::General;
    GeneralFields f = parse_general_fields(spec);

    using namespace fx;
    const Variables v = spec.vars();
    const FieldExpr k = param("K", v);
    FieldExpr w_norm2 = unary(NodeKind::Abs2, coord('w', 1, v));
    for (int j = 2; j <= spec.codim; ++j)
        w_norm2 = w_norm2 + unary(NodeKind::Abs2, coord('w', j, v));

    WormDomain dom;
    dom.spec = spec;
    dom.K = K;
    dom.bindings = spec.bindings();
    dom.bindings["K"] = K;
    dom.u = f.u;
    dom.sigma = f.sigma;
    dom.d_def = f.d_def;
    dom.R = literal(1.0, v) / (f.sigma + k);
    dom.eta = unary(NodeKind::Theta, f.d_def);
    const FieldExpr phase = unary(NodeKind::Exp, -(imag_unit(v) * f.u));
    dom.r = (f.sigma + k) * w_norm2 -
            literal(2.0, v) * unary(NodeKind::Re, coord('w', 1, v) * phase) + dom.eta;
    require_real(dom.r, dom.bindings, "r");
    return dom;
}

FieldExpr centered_form(const WormDomain& dom)
{
    using namespace fx;
    const Variables v = dom.spec.vars();
    const FieldExpr inv_r = literal(1.0, v) / dom.R;
    const FieldExpr c1 = dom.R * unary(NodeKind::Exp, imag_unit(v) * dom.u);
    FieldExpr e = inv_r * unary(NodeKind::Abs2, coord('w', 1, v) - c1);
    for (int j = 2; j <= dom.codim(); ++j)
        e = e + inv_r * unary(NodeKind::Abs2, coord('w', j, v));
    return e + dom.eta - dom.R;
}

BaseValues base_values(const WormDomain& dom, const CVec& z)
{
    return {eval_real(dom.u, z, dom.bindings), eval_real(dom.R, z, dom.bindings),
            eval_real(dom.eta, z, dom.bindings)};
}

FiberGeometry fiber_geometry(const WormDomain& dom, const CVec& z)
{
    const BaseValues b = base_values(dom, z);
    if (!(b.eta < b.R))
        throw DomainError("base point outside {eta < R}");
    FiberGeometry g;
    g.center = CVec::Zero(dom.codim());
    g.center[0] = b.R * std::polar(1.0, b.u);
    g.radius = std::sqrt(b.R * (b.R - b.eta));
    return g;
}

std::vector<CVec> sphere_directions(int d, int count)
{
    if (d < 1 || count < 0)
        throw Error("sphere_directions: bad arguments");
    if (2 * static_cast<std::size_t>(d) - 1 > kPrimes.size())
        throw ConfigError("sphere_directions: fiber dimension too large");
    std::vector<CVec> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        CVec xi = CVec::Zero(d);
        if (d == 1) {
            xi[0] = std::polar(1.0, kTwoPi * k / count);
        } else {
            double remaining = 1.0;
            std::size_t prime = 0;
            for (int j = 0; j + 1 < d; ++j) {
                const double u = radical_inverse(k, kPrimes[prime++]);
                const double share = remaining * (1.0 - std::pow(u, 1.0 / (d - 1 - j)));
                const double phase = kTwoPi * radical_inverse(k, kPrimes[prime++]);
                xi[j] = std::polar(std::sqrt(share), phase);
                remaining -= share;
            }
            const double phase = kTwoPi * radical_inverse(k, kPrimes[prime]);
            xi[d - 1] = std::polar(std::sqrt(std::max(remaining, 0.0)), phase);
        }
        out.push_back(std::move(xi));
    }
    return out;
}

SampleSet sample_boundary(const WormDomain& dom, std::span<const CVec> base_grid, int sphere_count)
{
    if (sphere_count < 1)
        throw ConfigError("sphere_count must be >= 1");
    const Tolerances& tol = dom.spec.tolerances;
    const auto directions = sphere_directions(dom.codim(), sphere_count);

    SampleSet out;
    out.base_points = base_grid.size();
    for (std::size_t b = 0; b < base_grid.size(); ++b) {
        const CVec& z = base_grid[b];
        BaseValues bv;
        try {
            bv = base_values(dom, z);
        } catch (const DomainError&) {
            ++out.skipped;
            continue;
        }
        if (!(bv.eta < bv.R)) {
            ++out.skipped;
            continue;
        }
        const cplx e_iu = std::polar(1.0, bv.u);
        const double radius = std::sqrt(bv.R * (bv.R - bv.eta));
        for (int k = 0; k < sphere_count; ++k) {
            CVec xi = directions[k];
            xi[0] *= -e_iu;
            BoundarySample s;
            s.z = z;
            s.w = radius * xi;
            s.w[0] += bv.R * e_iu;
            const Jet2 j = eval_jet(dom.r, s.point(), dom.bindings);
            s.residual = j.value.real();
            s.scale = j.del.norm();
            s.eta = bv.eta;
            s.on_core = s.w.norm() <= tol.core_w && bv.eta <= tol.core_eta;
            s.base_index = b;
            s.direction = k;
            out.samples.push_back(std::move(s));
        }
    }
    return out;
}

} // namespace worm
