#include <cmath>
#include <random>

#include <doctest.h>

#include "support.hpp"
#include "worm/error.hpp"
#include "worm/jet.hpp"

using namespace worm;
using worm::testing::random_point;

namespace {

const cplx I(0.0, 1.0);

Jet2 coord(int k, const CVec& p)
{
    return Jet2::coordinate(k, p);
}

} // namespace

TEST_CASE("coordinate jets")
{
    CVec p(2);
    p << cplx(1, 2), cplx(-0.5, 0.25);
    const Jet2 z2 = coord(2, p);
    CHECK(z2.value == p[1]);
    CHECK(z2.del[1] == 1.0);
    CHECK(z2.del[0] == 0.0);
    CHECK(z2.delbar.norm() == 0.0);
    CHECK(z2.mixed.norm() == 0.0);
    const Jet2 c = conj(z2);
    CHECK(c.delbar[1] == 1.0);
    CHECK(c.del.norm() == 0.0);
}

TEST_CASE("|z|^2 has mixed Hessian equal to the identity")
{
    std::mt19937_64 rng(7);
    const CVec p = random_point(rng, 3);
    Jet2 f = abs2(coord(1, p)) + abs2(coord(2, p)) + abs2(coord(3, p));
    CHECK(f.value.real() == doctest::Approx(p.squaredNorm()));
    CHECK((f.del - p.conjugate()).norm() < 1e-15);
    CHECK((f.mixed - CMat::Identity(3, 3)).norm() < 1e-15);
    CHECK(f.is_real());
}

TEST_CASE("product rule for the mixed part")
{
    std::mt19937_64 rng(11);
    const CVec p = random_point(rng, 2);
    const Jet2 f = exp_c(coord(1, p) * conj(coord(2, p)));
    const Jet2 g = abs2(coord(1, p)) + coord(2, p);
    const Jet2 fg = f * g;
    const CMat expected = f.value * g.mixed + g.value * f.mixed + f.del * g.delbar.transpose() +
                          g.del * f.delbar.transpose();
    CHECK((fg.mixed - expected).norm() < 1e-12 * std::max(1.0, expected.norm()));
}

TEST_CASE("conjugation swaps gradients and transposes the mixed part")
{
    std::mt19937_64 rng(13);
    const CVec p = random_point(rng, 2);
    const Jet2 f = exp_c(coord(1, p) * conj(coord(2, p))) * coord(1, p);
    const Jet2 c = conj(f);
    CHECK(c.value == std::conj(f.value));
    CHECK((c.del - f.delbar.conjugate()).norm() < 1e-15);
    CHECK((c.mixed - f.mixed.adjoint()).norm() < 1e-15);
}

TEST_CASE("holomorphic functions have zero mixed part; log|z|^2 is pluriharmonic")
{
    std::mt19937_64 rng(17);
    const CVec p = random_point(rng, 2);
    const Jet2 h = exp_c(coord(1, p) * coord(2, p)) / (coord(1, p) + Jet2::constant(3.0, 2));
    CHECK(h.mixed.norm() < 1e-14);
    CHECK(h.delbar.norm() < 1e-14);
    const Jet2 l = log_abs2(coord(1, p));
    CHECK(l.mixed.norm() < 1e-14);
    CHECK(std::abs(l.del[0] - 1.0 / p[0]) < 1e-14);
}

TEST_CASE("pow_int and recip")
{
    std::mt19937_64 rng(19);
    const CVec p = random_point(rng, 1);
    const Jet2 z = coord(1, p);
    const Jet2 a = pow_int(z, 3);
    CHECK(std::abs(a.value - p[0] * p[0] * p[0]) < 1e-14);
    CHECK(std::abs(a.del[0] - 3.0 * p[0] * p[0]) < 1e-14);
    const Jet2 b = pow_int(z, -2) * pow_int(z, 2);
    CHECK(std::abs(b.value - 1.0) < 1e-14);
    CHECK(b.del.norm() < 1e-13);
    CHECK_THROWS_AS(recip(Jet2::constant(0.0, 1)), DomainError);
    CHECK_THROWS_AS(log_abs2(Jet2::constant(0.0, 1)), DomainError);
    CHECK_THROWS_AS(pow_int(Jet2::constant(0.0, 1), -1), DomainError);
}

TEST_CASE("real composition uses the chain rule for mixed parts")
{
    std::mt19937_64 rng(23);
    const CVec p = random_point(rng, 2);
    const Jet2 f = abs2(coord(1, p)) + re(coord(2, p)) + Jet2::constant(0.5, 2);
    const Jet2 t = compose_real(f, theta);
    const Taylor2 tv = theta(f.value.real());
    const CMat expected = tv.d2 * f.del * f.delbar.transpose() + tv.d1 * f.mixed;
    CHECK((t.mixed - expected).norm() < 1e-14);
    CHECK_THROWS_AS(compose_real(coord(1, p) + Jet2::constant(I, 2), theta), DomainError);
}

TEST_CASE("random jets agree with finite differences")
{
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const CVec p = random_point(rng, 2);
        const Jet2 a = coord(1, p);
        const Jet2 b = coord(2, p);
        const Jet2 f = exp_c(0.3 * (a * conj(b))) + abs2(a - b) * log_abs2(b + Jet2::constant(2.5, 2));
        auto value = [&](const CVec& q) {
            const Jet2 x = coord(1, q);
            const Jet2 y = coord(2, q);
            return (exp_c(0.3 * (x * conj(y))) + abs2(x - y) * log_abs2(y + Jet2::constant(2.5, 2)));
        };
        const double h = 1e-5;
        for (int k = 0; k < 2; ++k) {
            CVec px = p, mx = p, py = p, my = p;
            px[k] += h;
            mx[k] -= h;
            py[k] += cplx(0, h);
            my[k] -= cplx(0, h);
            const cplx fx = (value(px).value - value(mx).value) / (2 * h);
            const cplx fy = (value(py).value - value(my).value) / (2 * h);
            CHECK(std::abs(f.del[k] - 0.5 * (fx - I * fy)) < 1e-8);
            CHECK(std::abs(f.delbar[k] - 0.5 * (fx + I * fy)) < 1e-8);
            const CVec gx = (value(px).del - value(mx).del) / (2 * h);
            const CVec gy = (value(py).del - value(my).del) / (2 * h);
            CHECK((f.mixed.col(k) - 0.5 * (gx + I * gy)).norm() < 1e-8);
        }
    }
}
