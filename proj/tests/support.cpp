#include <algorithm>
#include <cstdio>

#include "support.hpp"

namespace worm::testing {

namespace {

std::string number(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", u(rng));
    std::string s = buf;
    return s[0] == '-' ? "(" + s + ")" : s;
}

std::string leaf(std::mt19937_64& rng, int n, int d)
{
    std::uniform_int_distribution<int> pick(0, 5);
    std::uniform_int_distribution<int> coord(1, n + d);
    auto var = [&] {
        const int k = coord(rng);
        return k <= n ? "z" + std::to_string(k) : "w" + std::to_string(k - n);
    };
    switch (pick(rng)) {
    case 0:
        return number(rng);
    case 1:
        return "i";
    case 2:
        return "conj(" + var() + ")";
    default:
        return var();
    }
}

} // namespace

std::string random_expression(std::mt19937_64& rng, int n, int d, int depth)
{
    if (depth <= 0)
        return leaf(rng, n, d);
    std::uniform_int_distribution<int> pick(0, 13);
    const auto sub = [&] { return random_expression(rng, n, d, depth - 1); };
    switch (pick(rng)) {
    case 0:
        return "(" + sub() + " + " + sub() + ")";
    case 1:
        return "(" + sub() + " - " + sub() + ")";
    case 2:
    case 3:
        return "(" + sub() + " * " + sub() + ")";
    case 4:
        return "(" + sub() + " / (1 + abs2(" + sub() + ")))";
    case 5:
        return "conj(" + sub() + ")";
    case 6:
        return "re(" + sub() + ")";
    case 7:
        return "im(" + sub() + ")";
    case 8:
        return "abs2(" + sub() + ")";
    case 9:
        return "exp(0.5*" + sub() + ")";
    case 10:
        return "log_abs2(1 + abs2(" + sub() + "))";
    case 11:
        return "theta(re(" + sub() + ") + 0.5)";
    case 12:
        return "chi(re(" + sub() + "), -2, -1, 1, 2, 3)";
    default:
        return "(" + sub() + ")^" + std::to_string(std::uniform_int_distribution<int>(2, 3)(rng));
    }
}

CVec random_point(std::mt19937_64& rng, int dim, double radius)
{
    std::uniform_real_distribution<double> u(-radius, radius);
    CVec p(dim);
    for (int k = 0; k < dim; ++k)
        p[k] = cplx(u(rng), u(rng));
    return p;
}

FiniteDifferenceJet finite_difference(const FieldExpr& e, const CVec& p, double h, const Bindings& b)
{
    const Eigen::Index m = p.size();
    FiniteDifferenceJet fd{CVec(m), CVec(m), CMat(m, m)};
    for (Eigen::Index k = 0; k < m; ++k) {
        CVec px = p, mx = p, py = p, my = p;
        px[k] += h;
        mx[k] -= h;
        py[k] += cplx(0.0, h);
        my[k] -= cplx(0.0, h);
        const cplx fx = (eval_value(e, px, b) - eval_value(e, mx, b)) / (2.0 * h);
        const cplx fy = (eval_value(e, py, b) - eval_value(e, my, b)) / (2.0 * h);
        fd.del[k] = 0.5 * (fx - cplx(0.0, 1.0) * fy);
        fd.delbar[k] = 0.5 * (fx + cplx(0.0, 1.0) * fy);
        const CVec gx = (eval_jet(e, px, b).del - eval_jet(e, mx, b).del) / (2.0 * h);
        const CVec gy = (eval_jet(e, py, b).del - eval_jet(e, my, b).del) / (2.0 * h);
        fd.mixed.col(k) = 0.5 * (gx + cplx(0.0, 1.0) * gy);
    }
    return fd;
}

double relative_error(const CMat& a, const CMat& b)
{
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

double relative_error(const CVec& a, const CVec& b)
{
    return relative_error(CMat(a), CMat(b));
}

std::string spec_path(const std::string& name)
{
    return std::string(WORM_SPEC_DIR) + "/" + name;
}

std::string data_path(const std::string& name)
{
    return std::string(WORM_TEST_DATA) + "/" + name;
}

} // namespace worm::testing
