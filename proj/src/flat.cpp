#include "worm/flat.hpp"

#include <cmath>

#include "worm/error.hpp"

namespace worm {

namespace {

Taylor2 operator+(const Taylor2& a, const Taylor2& b)
{
    return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2};
}

// Quotient rule to second order.
Taylor2 operator/(const Taylor2& a, const Taylor2& b)
{
    const double q = a.value / b.value;
    const double q1 = (a.d1 - q * b.d1) / b.value;
    const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.value;
    return {q, q1, q2};
}

// f(s * x + shift) as a function of x.
Taylor2 affine_pullback(const Taylor2& f, double s)
{
    return {f.value, s * f.d1, s * s * f.d2};
}

} // namespace

Taylor2 theta(double x)
{
    if (x < kThetaUnderflow)
        return {};
    const double e = std::exp(-1.0 / x);
    const double ix = 1.0 / x;
    const double ix2 = ix * ix;
    return {e, e * ix2, e * (ix2 * ix2 - 2.0 * ix2 * ix)};
}

Taylor2 smoothstep(double y)
{
    const Taylor2 a = theta(y);
    const Taylor2 b = affine_pullback(theta(1.0 - y), -1.0);
    return a / (a + b);
}

void ChiParams::validate() const
{
    if (!(a1 < b1 && b1 <= a2 && a2 < b2))
        throw ConfigError("chi parameters must satisfy a1 < b1 <= a2 < b2");
    if (!(M >= 1.0))
        throw ConfigError("chi parameter M must be >= 1");
}

Taylor2 chi(double x, const ChiParams& p)
{
    const double right_width = p.b2 - p.a2;
    const double left_width = p.b1 - p.a1;
    const Taylor2 right = affine_pullback(smoothstep((x - p.a2) / right_width), 1.0 / right_width);
    const Taylor2 left = affine_pullback(smoothstep((p.b1 - x) / left_width), -1.0 / left_width);
    const Taylor2 sum = right + left;
    return {p.M * sum.value, p.M * sum.d1, p.M * sum.d2};
}

} // namespace worm
