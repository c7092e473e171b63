#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "support.hpp"
#include "worm/constants.hpp"
#include "worm/dangelo.hpp"
#include "worm/error.hpp"
#include "worm/spec_io.hpp"

using namespace worm;
using namespace worm::testing;

namespace {

constexpr double kPi = std::numbers::pi;

LoopSpec circle(double radius, int winding = 1, int segments = 512)
{
    LoopSpec l;
    l.name = "circle";
    l.z = {std::to_string(radius) + "*exp(i*s)"};
    l.winding = winding;
    l.segments = segments;
    return l;
}

CVec z_on_core(std::mt19937_64& rng, double log_r_max)
{
    std::uniform_real_distribution<double> lr(-log_r_max, log_r_max);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    CVec z(1);
    z[0] = std::polar(std::exp(lr(rng)), ang(rng));
    return z;
}

} // namespace

TEST_CASE("normal field: N r = 1 and N = -e^{iu} e_w1 on the core")
{
    const WormDomain df = build_df_worm(1.3, ChiParams{});
    std::mt19937_64 rng(101);
    for (int k = 0; k < 20; ++k) {
        const CVec z = z_on_core(rng, 0.9);
        CVec p(2);
        p << z[0], 0.0;
        const GradientHessian gh = gradient_hessian(df, p);
        const CVec N = normal_field(gh);
        CHECK(std::abs((gh.g.cwiseProduct(N)).sum() - 1.0) < 1e-13);
        const cplx e = std::exp(cplx(0.0, 1.3 * std::log(std::norm(z[0]))));
        CHECK(std::abs(N[0]) < 1e-13);
        CHECK(std::abs(N[1] + e) < 1e-13);
    }
}

TEST_CASE("normal field rejects a vanishing gradient")
{
    const WormDomain df = build_df_worm(1.0, ChiParams{});
    CVec p(2);
    p << 1.0, 1.0; // |w - 1|^2 - 1 has gradient conj(w - 1) = 0 there
    CHECK_THROWS_AS(normal_field(df, p), DomainError);
}

TEST_CASE("DF worm: alpha(d/dz) = 2 i t / z")
{
    for (double t : {0.5, 1.0, 2.0}) {
        const WormDomain df = build_df_worm(t, ChiParams{});
        std::mt19937_64 rng(103);
        for (int k = 0; k < 10; ++k) {
            const CVec z = z_on_core(rng, 0.95);
            const CVec a = dangelo_coefficients(df, z);
            CHECK(std::abs(a[0] - cplx(0.0, 2.0 * t) / z[0]) < 1e-12 * std::max(1.0, std::abs(a[0])));
        }
    }
}

TEST_CASE("restricted form at z = 1: -4t along the circle, 0 radially")
{
    const double t = 1.7;
    const WormDomain df = build_df_worm(t, ChiParams{});
    CVec z(1), tangent(1), radial(1);
    z << 1.0;
    tangent << cplx(0.0, 1.0);
    radial << 1.0;
    CHECK(restricted_form(df, z, tangent) == doctest::Approx(-4.0 * t).epsilon(1e-13));
    CHECK(std::abs(restricted_form(df, z, radial)) < 1e-13);
}

TEST_CASE("general worm: alpha_j = 2 i du/dz_j and agreement with 2 d^c u")
{
    const WormSpec spec = load_spec(spec_path("worm_annulus_codim2.json"));
    const WormDomain dom = build_general_worm(spec, 60.0);
    std::mt19937_64 rng(107);
    for (int k = 0; k < 50; ++k) {
        const CVec z = z_on_core(rng, 0.5);
        const CVec a = dangelo_coefficients(dom, z);
        CHECK(std::abs(a[0] - cplx(0.0, 2.0 * spec.t) / z[0]) < 1e-10);
        const CVec v = random_point(rng, 1);
        const cplx oracle = dcu_oracle(dom, z, v);
        CHECK(std::abs(oracle.imag()) < 1e-12);
        CHECK(std::abs(restricted_form(dom, z, v) - oracle.real()) < 1e-10 * std::max(1.0, std::abs(oracle)));
    }
}

TEST_CASE("dangelo_eval refuses points off the core")
{
    const WormDomain df = build_df_worm(1.0, ChiParams{});
    CVec z(1), Z(1);
    z << 5.0;
    Z << 1.0;
    CHECK_THROWS_AS(dangelo_eval(df, z, Z), DomainError);
}

TEST_CASE("DF periods: -8 pi t per turn, orientation and winding")
{
    const WormDomain df = build_df_worm(1.0, ChiParams{});
    const PeriodReport p1 = period(df, circle(1.0));
    CHECK(p1.integrated == doctest::Approx(-8.0 * kPi).epsilon(1e-10));
    CHECK(p1.oracle_discrepancy < 1e-8);
    REQUIRE(p1.expected.has_value());
    CHECK(*p1.expected == doctest::Approx(-8.0 * kPi));
    CHECK(p1.pass);
    CHECK(p1.max_eta == 0.0);
    CHECK(std::abs(p1.centroid[0]) < 1e-12);
    CHECK(p1.mean_radius == doctest::Approx(1.0));

    const PeriodReport p2 = period(df, circle(1.0, 2, 1024));
    CHECK(p2.integrated == doctest::Approx(2.0 * p1.integrated).epsilon(1e-10));
    CHECK(p2.winding == 2);

    LoopSpec rev = circle(1.0);
    rev.z = {"exp(-i*s)"};
    const PeriodReport pr = period(df, rev);
    CHECK(pr.integrated == doctest::Approx(-p1.integrated).epsilon(1e-10));
    REQUIRE(pr.expected.has_value());
    CHECK(*pr.expected == doctest::Approx(8.0 * kPi));
}

TEST_CASE("periods are linear in t")
{
    double base = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
        const WormDomain df = build_df_worm(t, ChiParams{});
        const double p = period(df, circle(1.0)).integrated;
        if (t == 0.5)
            base = p;
        CHECK(p == doctest::Approx(base * t / 0.5).epsilon(1e-10));
    }
}

TEST_CASE("homotopic loops in the core have equal periods")
{
    const WormDomain df = build_df_worm(1.0, ChiParams{});
    LoopSpec wobble;
    wobble.name = "wobble";
    wobble.z = {"exp(i*s) + 0.2*exp(2*i*s)"};
    CHECK(homotopy_invariance(df, circle(1.0), circle(0.8), 512) < 1e-9);
    CHECK(homotopy_invariance(df, circle(1.0), wobble, 1024) < 1e-7);
    const PeriodReport pw = period(df, wobble, 1024);
    REQUIRE(pw.expected.has_value());
    CHECK(*pw.expected == doctest::Approx(-8.0 * kPi));
}

TEST_CASE("a loop not winding around 0 has zero period")
{
    const WormDomain df = build_df_worm(1.0, ChiParams{});
    LoopSpec l;
    l.name = "off";
    l.z = {"1.5 + 0.2*exp(i*s)"};
    const PeriodReport p = period(df, l);
    CHECK(std::abs(p.integrated) < 1e-9);
    REQUIRE(p.expected.has_value());
    CHECK(*p.expected == 0.0);
}

TEST_CASE("Simpson error drops by at least 8x per halving")
{
    const WormDomain df = build_df_worm(1.0, ChiParams{});
    LoopSpec l;
    l.name = "wobble";
    l.z = {"exp(i*s) + 0.3*exp(3*i*s)"};
    const double exact = -8.0 * kPi;
    const double e16 = std::abs(period(df, l, 16).integrated - exact);
    const double e32 = std::abs(period(df, l, 32).integrated - exact);
    REQUIRE(e16 > 1e-10);
    CHECK(e16 / std::max(e32, 1e-300) >= 8.0);
}

TEST_CASE("period errors")
{
    const WormDomain df = build_df_worm(1.0, ChiParams{});
    CHECK_THROWS_AS(period(df, circle(3.0)), DomainError);
    CHECK_THROWS_AS(period(df, circle(1.0), 15), ConfigError);
    CHECK_THROWS_AS(period(df, circle(1.0), 8), ConfigError);
}

TEST_CASE("pluriharmonic u = Re z1 on the ball spec: all periods vanish")
{
    const WormSpec spec = load_spec(spec_path("ball_trivial.json"));
    const ResolvedWorm rw = build_worm(spec);
    for (const LoopSpec& l : spec.loops) {
        const PeriodReport p = period(rw.domain, l);
        CHECK(std::abs(p.integrated) < 1e-7);
        CHECK(p.pass);
    }
}
