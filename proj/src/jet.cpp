#include "worm/jet.hpp"

#include <cmath>
#include <string>

#include "worm/error.hpp"

namespace worm {

namespace {

void check_dims(const Jet2& f, const Jet2& g)
{
    if (f.dim() != g.dim())
        throw Error("jet dimension mismatch: " + std::to_string(f.dim()) + " vs " +
                    std::to_string(g.dim()));
}

bool close(cplx a, cplx b, double tol)
{
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

} // namespace

Jet2::Jet2(int m)
    : del(CVec::Zero(m)), delbar(CVec::Zero(m)), mixed(CMat::Zero(m, m))
{}

Jet2 Jet2::constant(cplx c, int m)
{
    Jet2 j(m);
    j.value = c;
    return j;
}

Jet2 Jet2::coordinate(int index, const CVec& point)
{
    const int m = static_cast<int>(point.size());
    if (index < 1 || index > m)
        throw Error("coordinate index " + std::to_string(index) + " out of range 1.." +
                    std::to_string(m));
    Jet2 j(m);
    j.value = point[index - 1];
    j.del[index - 1] = 1.0;
    return j;
}

bool Jet2::is_real(double tol) const
{
    if (std::abs(value.imag()) > tol * std::max(1.0, std::abs(value)))
        return false;
    const int m = dim();
    for (int j = 0; j < m; ++j) {
        if (!close(delbar[j], std::conj(del[j]), tol))
            return false;
        for (int k = 0; k < m; ++k)
            if (!close(mixed(j, k), std::conj(mixed(k, j)), tol))
                return false;
    }
    return true;
}

Jet2 operator+(const Jet2& f, const Jet2& g)
{
    check_dims(f, g);
    Jet2 h;
    h.value = f.value + g.value;
    h.del = f.del + g.del;
    h.delbar = f.delbar + g.delbar;
    h.mixed = f.mixed + g.mixed;
    return h;
}

Jet2 operator-(const Jet2& f, const Jet2& g)
{
    check_dims(f, g);
    Jet2 h;
    h.value = f.value - g.value;
    h.del = f.del - g.del;
    h.delbar = f.delbar - g.delbar;
    h.mixed = f.mixed - g.mixed;
    return h;
}

Jet2 operator-(const Jet2& f)
{
    Jet2 h;
    h.value = -f.value;
    h.del = -f.del;
    h.delbar = -f.delbar;
    h.mixed = -f.mixed;
    return h;
}

Jet2 operator*(cplx c, const Jet2& f)
{
    Jet2 h;
    h.value = c * f.value;
    h.del = c * f.del;
    h.delbar = c * f.delbar;
    h.mixed = c * f.mixed;
    return h;
}

Jet2 operator*(const Jet2& f, const Jet2& g)
{
    check_dims(f, g);
    Jet2 h;
    h.value = f.value * g.value;
    h.del = f.value * g.del + g.value * f.del;
    h.delbar = f.value * g.delbar + g.value * f.delbar;
    h.mixed = f.value * g.mixed + g.value * f.mixed + f.del * g.delbar.transpose() +
              g.del * f.delbar.transpose();
    return h;
}

Jet2 operator/(const Jet2& f, const Jet2& g)
{
    return f * recip(g);
}

Jet2 conj(const Jet2& f)
{
    Jet2 h;
    h.value = std::conj(f.value);
    h.del = f.delbar.conjugate();
    h.delbar = f.del.conjugate();
    h.mixed = f.mixed.adjoint();
    return h;
}

Jet2 re(const Jet2& f)
{
    return 0.5 * (f + conj(f));
}

Jet2 im(const Jet2& f)
{
    return cplx(0.0, -0.5) * (f - conj(f));
}

Jet2 abs2(const Jet2& f)
{
    Jet2 h = f * conj(f);
    h.value = std::norm(f.value);
    return h;
}

Jet2 compose_holomorphic(const Jet2& f, cplx g, cplx g1, cplx g2)
{
    Jet2 h;
    h.value = g;
    h.del = g1 * f.del;
    h.delbar = g1 * f.delbar;
    h.mixed = g2 * (f.del * f.delbar.transpose()) + g1 * f.mixed;
    return h;
}

Jet2 recip(const Jet2& f)
{
    if (f.value == cplx(0.0, 0.0))
        throw DomainError("reciprocal of zero");
    const cplx x = 1.0 / f.value;
    return compose_holomorphic(f, x, -x * x, 2.0 * x * x * x);
}

Jet2 exp_c(const Jet2& f)
{
    const cplx e = std::exp(f.value);
    return compose_holomorphic(f, e, e, e);
}

Jet2 log_abs2(const Jet2& f)
{
    const Jet2 a = abs2(f);
    const double x = a.value.real();
    if (!(x > 0.0))
        throw DomainError("log_abs2 of zero");
    return compose_real(a, Taylor2{std::log(x), 1.0 / x, -1.0 / (x * x)});
}

Jet2 pow_int(const Jet2& f, int p)
{
    const int m = f.dim();
    if (p == 0)
        return Jet2::constant(1.0, m);
    if (p == 1)
        return f;
    if (p < 0 && f.value == cplx(0.0, 0.0))
        throw DomainError("negative power of zero");
    const cplx x = f.value;
    const double pd = p;
    const cplx g = std::pow(x, p);
    const cplx g1 = pd * std::pow(x, p - 1);
    const cplx g2 = pd * (pd - 1.0) * std::pow(x, p - 2);
    return compose_holomorphic(f, g, g1, g2);
}

Jet2 compose_real(const Jet2& f, const Taylor2& g)
{
    if (std::abs(f.value.imag()) > 1e-10 * std::max(1.0, std::abs(f.value)))
        throw DomainError("real composition applied to a complex-valued field");
    return compose_holomorphic(f, g.value, g.d1, g.d2);
}

} // namespace worm
