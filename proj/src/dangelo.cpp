#include "worm/dangelo.hpp"

#include <cmath>
#include <numbers>

#include "worm/error.hpp"

namespace worm {

namespace {

// Kahan-Babuska-Neumaier compensated sum.
class CompensatedSum {
  public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

CVec core_point(const WormDomain& domain, const CVec& z)
{
    if (z.size() != domain.n())
        throw Error("base point has the wrong dimension");
    const double eta = eval_real(domain.eta, z, domain.bindings);
    if (eta > domain.spec.tolerances.core_eta)
        throw DomainError("point is not on the core (eta = " + std::to_string(eta) + ")");
    CVec p = CVec::Zero(domain.dim());
    p.head(domain.n()) = z;
    return p;
}

struct Loop {
    std::vector<FieldExpr> z;
    double length = 0.0;
};

Loop parse_loop(const WormDomain& domain, const LoopSpec& spec)
{
    if (static_cast<int>(spec.z.size()) != domain.n())
        throw ConfigError("loop '" + spec.name + "' needs one expression per base coordinate");
    if (spec.winding == 0)
        throw ConfigError("loop '" + spec.name + "' has zero winding");
    Loop loop;
    const Variables curve{domain.n(), 0, true};
    for (const auto& src : spec.z)
        loop.z.push_back(parse(src, curve));
    loop.length = 2.0 * std::numbers::pi * spec.winding;
    return loop;
}

// z(s) and z'(s) for real s.
std::pair<CVec, CVec> loop_point(const Loop& loop, double s, const Bindings& b)
{
    CVec at(1);
    at[0] = s;
    CVec z(loop.z.size());
    CVec dz(loop.z.size());
    for (std::size_t j = 0; j < loop.z.size(); ++j) {
        const Jet2 jet = eval_jet(loop.z[j], at, b);
        z[j] = jet.value;
        dz[j] = jet.del[0] + jet.delbar[0];
    }
    return {z, dz};
}

std::vector<double> nodes(const Loop& loop, int segments)
{
    std::vector<double> s(segments + 1);
    for (int k = 0; k <= segments; ++k)
        s[k] = loop.length * static_cast<double>(k) / segments;
    return s;
}

// Coefficient c of u = c * f: literals, bound parameters and their negations.
std::optional<double> constant_of(const Node& node, const Bindings& b)
{
    switch (node.kind) {
    case NodeKind::Literal:
        return node.number;
    case NodeKind::Param: {
        const auto it = b.find(node.name);
        if (it == b.end())
            return std::nullopt;
        return it->second;
    }
    case NodeKind::Neg:
        if (auto c = constant_of(*node.children[0], b))
            return -*c;
        return std::nullopt;
    default:
        return std::nullopt;
    }
}

enum class Shape { None, LogAbs2, Trivial };

struct Recognized {
    Shape shape = Shape::None;
    double coefficient = 0.0;
    int index = 0;
};

Recognized recognize_factor(const Node& node)
{
    const bool wraps_base = node.children.size() == 1 &&
                            node.children[0]->kind == NodeKind::Coordinate &&
                            node.children[0]->family == 'z';
    if (node.kind == NodeKind::LogAbs2 && wraps_base)
        return {Shape::LogAbs2, 1.0, node.children[0]->index};
    if ((node.kind == NodeKind::Re || node.kind == NodeKind::Im) && wraps_base)
        return {Shape::Trivial, 1.0, node.children[0]->index};
    return {};
}

Recognized recognize(const Node& node, const Bindings& b)
{
    if (constant_of(node, b))
        return {Shape::Trivial, 0.0, 0};
    if (node.kind == NodeKind::Mul) {
        const Node& l = *node.children[0];
        const Node& r = *node.children[1];
        if (auto c = constant_of(l, b)) {
            Recognized f = recognize_factor(r);
            f.coefficient *= *c;
            return f;
        }
        if (auto c = constant_of(r, b)) {
            Recognized f = recognize_factor(l);
            f.coefficient *= *c;
            return f;
        }
        return {};
    }
    return recognize_factor(node);
}

} // namespace

CVec normal_field(const GradientHessian& gh)
{
    const double n2 = gh.g.squaredNorm();
    if (std::sqrt(n2) <= 1e-12)
        throw DomainError("normal field: degenerate gradient");
    return gh.g.conjugate() / n2;
}

CVec normal_field(const WormDomain& domain, const CVec& point)
{
    return normal_field(gradient_hessian(domain, point));
}

cplx dangelo_eval(const WormDomain& domain, const CVec& z, const CVec& Z)
{
    if (Z.size() != domain.n())
        throw Error("tangent vector has the wrong dimension");
    const GradientHessian gh = gradient_hessian(domain, core_point(domain, z));
    const CVec nf = normal_field(gh);
    CVec full = CVec::Zero(domain.dim());
    full.head(domain.n()) = Z;
    return 2.0 * (full.transpose() * gh.H * nf.conjugate())(0, 0);
}

CVec dangelo_coefficients(const WormDomain& domain, const CVec& z)
{
    const GradientHessian gh = gradient_hessian(domain, core_point(domain, z));
    const CVec nf = normal_field(gh);
    return 2.0 * gh.H.topRows(domain.n()) * nf.conjugate();
}

double restricted_form(const WormDomain& domain, const CVec& z, const CVec& v)
{
    return 2.0 * dangelo_coefficients(domain, z).cwiseProduct(v).sum().real();
}

cplx dcu_oracle(const WormDomain& domain, const CVec& z, const CVec& v)
{
    CVec p = CVec::Zero(domain.u.vars().n + domain.u.vars().d);
    p.head(domain.n()) = z;
    const Jet2 ju = eval_jet(domain.u, p, domain.bindings);
    const cplx du = ju.del.head(domain.n()).cwiseProduct(v).sum();
    const cplx dbar_u = ju.delbar.head(domain.n()).cwiseProduct(v.conjugate()).sum();
    return cplx(0.0, 2.0) * (du - dbar_u);
}

std::optional<double> closed_form_period(const WormDomain& domain, const LoopSpec& spec, int segments)
{
    const Recognized rec = recognize(domain.u.root(), domain.bindings);
    if (rec.shape == Shape::None)
        return std::nullopt;
    if (rec.shape == Shape::Trivial)
        return 0.0;
    const Loop loop = parse_loop(domain, spec);
    double turn = 0.0;
    cplx prev;
    bool first = true;
    for (double s : nodes(loop, segments)) {
        const cplx zk = loop_point(loop, s, domain.bindings).first[rec.index - 1];
        if (zk == 0.0)
            return std::nullopt;
        if (!first)
            turn += std::arg(zk / prev);
        prev = zk;
        first = false;
    }
    const double winding = std::round(turn / (2.0 * std::numbers::pi));
    return -8.0 * std::numbers::pi * rec.coefficient * winding;
}

PeriodReport period(const WormDomain& domain, const LoopSpec& spec, int segments)
{
    if (segments < 16 || segments % 2 != 0)
        throw ConfigError("segments must be even and >= 16");
    const Loop loop = parse_loop(domain, spec);
    const std::vector<double> s = nodes(loop, segments);
    const double h = loop.length / segments;

    PeriodReport rep;
    rep.name = spec.name;
    rep.winding = spec.winding;
    rep.segments = segments;
    rep.centroid = CVec::Zero(domain.n());

    CompensatedSum form;
    CompensatedSum oracle;
    std::vector<CVec> points;
    for (int k = 0; k <= segments; ++k) {
        const auto [z, dz] = loop_point(loop, s[k], domain.bindings);
        const double eta = eval_real(domain.eta, z, domain.bindings);
        rep.max_eta = std::max(rep.max_eta, eta);
        if (eta > domain.spec.tolerances.core_eta)
            throw DomainError("loop '" + spec.name + "' leaves Y at s = " + std::to_string(s[k]));
        const double w = (k == 0 || k == segments) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        form.add(w * restricted_form(domain, z, dz));
        const cplx o = dcu_oracle(domain, z, dz);
        rep.max_imag_residual = std::max(rep.max_imag_residual, std::abs(o.imag()));
        oracle.add(w * o.real());
        if (k < segments) {
            rep.centroid += z;
            points.push_back(z);
        }
    }
    rep.centroid /= static_cast<double>(segments);
    for (const auto& z : points)
        rep.mean_radius += (z - rep.centroid).norm();
    rep.mean_radius /= static_cast<double>(segments);

    rep.integrated = form.value() * h / 3.0;
    rep.oracle = oracle.value() * h / 3.0;
    rep.oracle_discrepancy = std::abs(rep.integrated - rep.oracle);
    rep.expected = closed_form_period(domain, spec, segments);
    const Tolerances& tol = domain.spec.tolerances;
    rep.pass = rep.oracle_discrepancy <= tol.period_oracle * std::max(1.0, std::abs(rep.oracle));
    if (rep.expected) {
        rep.expected_discrepancy = std::abs(rep.integrated - *rep.expected);
        rep.pass = rep.pass && *rep.expected_discrepancy <= tol.period_expected;
    }
    return rep;
}

PeriodReport period(const WormDomain& domain, const LoopSpec& loop)
{
    return period(domain, loop, loop.segments);
}

double homotopy_invariance(const WormDomain& domain, const LoopSpec& a, const LoopSpec& b, int segments)
{
    return std::abs(period(domain, a, segments).integrated - period(domain, b, segments).integrated);
}

} // namespace worm
