#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include "support.hpp"
#include "worm/error.hpp"
#include "worm/hermitian.hpp"

using namespace worm;

namespace {

CMat random_hermitian(std::mt19937_64& rng, int m)
{
    std::normal_distribution<double> g;
    CMat a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            a(i, j) = cplx(g(rng), g(rng));
    return 0.5 * (a + a.adjoint());
}

} // namespace

TEST_CASE("Jacobi reconstructs random Hermitian matrices and matches Eigen")
{
    std::mt19937_64 rng(41);
    for (int m = 1; m <= 16; ++m) {
        for (int rep = 0; rep < 4; ++rep) {
            const CMat a = random_hermitian(rng, m);
            const HermitianEigen e = jacobi_eigen(a);
            CAPTURE(m);
            const CMat rebuilt = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
            CHECK((rebuilt - a).norm() <= 1e-11 * a.norm());
            CHECK((e.vectors.adjoint() * e.vectors - CMat::Identity(m, m)).norm() < 1e-12);
            CHECK(std::is_sorted(e.values.data(), e.values.data() + m));
            Eigen::SelfAdjointEigenSolver<CMat> ref(a);
            CHECK((ref.eigenvalues() - e.values).cwiseAbs().maxCoeff() < 1e-11 * std::max(1.0, a.norm()));
        }
    }
}

TEST_CASE("Jacobi uses the upper triangle only")
{
    std::mt19937_64 rng(43);
    const CMat a = random_hermitian(rng, 5);
    CMat b = a;
    b.triangularView<Eigen::StrictlyLower>().setConstant(cplx(100, 100));
    CHECK((jacobi_eigen(a).values - jacobi_eigen(b).values).norm() < 1e-13);
}

TEST_CASE("Jacobi diagonal, degenerate and non-convergent inputs")
{
    CMat d = CMat::Zero(3, 3);
    d(0, 0) = 3;
    d(1, 1) = -1;
    d(2, 2) = 2;
    const HermitianEigen e = jacobi_eigen(d);
    CHECK(e.values[0] == -1);
    CHECK(e.values[2] == 3);
    CHECK(e.sweeps == 0);
    CHECK(jacobi_eigen(CMat::Identity(4, 4)).values.isOnes());
    std::mt19937_64 rng(47);
    CHECK_THROWS_AS(jacobi_eigen(random_hermitian(rng, 8), 1e-12, 1), NumericalError);
    CHECK_THROWS(jacobi_eigen(CMat::Zero(2, 3)));
}

TEST_CASE("tangent basis: orthonormal, annihilated by g, deterministic")
{
    std::mt19937_64 rng(53);
    for (int m = 2; m <= 6; ++m) {
        const CVec g = worm::testing::random_point(rng, m);
        const CMat b = tangent_basis(g);
        CHECK(b.rows() == m);
        CHECK(b.cols() == m - 1);
        CHECK((g.transpose() * b).norm() <= 1e-12 * g.norm());
        CHECK((b.adjoint() * b - CMat::Identity(m - 1, m - 1)).norm() < 1e-12);
        CHECK((tangent_basis(g) - b).norm() == 0.0);
    }
    CVec e1 = CVec::Zero(3);
    e1[0] = 1.0;
    const CMat b = tangent_basis(e1);
    CHECK(b.col(0).cwiseAbs().isApprox(Eigen::Vector3d(0, 1, 0)));
    CHECK(b.col(1).cwiseAbs().isApprox(Eigen::Vector3d(0, 0, 1)));
    CHECK_THROWS_AS(tangent_basis(CVec::Zero(3)), DomainError);
}

TEST_CASE("spectra of the projected form do not depend on the basis pivot")
{
    std::mt19937_64 rng(59);
    for (int rep = 0; rep < 20; ++rep) {
        const int m = 4;
        const CVec g = worm::testing::random_point(rng, m);
        const CMat h = random_hermitian(rng, m);
        const CMat b0 = tangent_basis(g, 0);
        const CMat b2 = tangent_basis(g, 2);
        const Eigen::VectorXd e0 = jacobi_eigen(b0.adjoint() * h * b0).values;
        const Eigen::VectorXd e2 = jacobi_eigen(b2.adjoint() * h * b2).values;
        CHECK((e0 - e2).cwiseAbs().maxCoeff() < 1e-11);
    }
}
