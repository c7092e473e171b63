#include "worm/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "worm/error.hpp"

namespace worm {

namespace {

double off_diagonal_norm(const CMat& a)
{
    double s = 0.0;
    for (Eigen::Index p = 0; p < a.rows(); ++p)
        for (Eigen::Index q = 0; q < a.cols(); ++q)
            if (p != q)
                s += std::norm(a(p, q));
    return std::sqrt(s);
}

} // namespace

HermitianEigen jacobi_eigen(const CMat& input, double tol, int max_sweeps)
{
    const Eigen::Index m = input.rows();
    if (input.cols() != m)
        throw Error("jacobi_eigen: matrix is not square");

    CMat a = input.triangularView<Eigen::Upper>();
    const CMat mirrored = a.adjoint();
    a.triangularView<Eigen::StrictlyLower>() = mirrored;
    for (Eigen::Index p = 0; p < m; ++p)
        a(p, p) = a(p, p).real();
    CMat v = CMat::Identity(m, m);

    const double threshold = tol * std::max(1.0, a.norm());
    int sweep = 0;
    while (off_diagonal_norm(a) > threshold) {
        if (sweep == max_sweeps)
            throw NumericalError("Jacobi eigensolver did not converge in " +
                                 std::to_string(max_sweeps) + " sweeps");
        ++sweep;
        for (Eigen::Index p = 0; p + 1 < m; ++p) {
            for (Eigen::Index q = p + 1; q < m; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0)
                    continue;
                const cplx phase = apq / mag; // e^{i phi}
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx eq = std::conj(phase); // e^{-i phi}

                // A <- A J with J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q).
                for (Eigen::Index k = 0; k < m; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp - s * eq * akq;
                    a(k, q) = s * akp + c * eq * akq;
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = c * vkp - s * eq * vkq;
                    v(k, q) = s * vkp + c * eq * vkq;
                }
                // A <- J^* A.
                for (Eigen::Index k = 0; k < m; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk - s * phase * aqk;
                    a(q, k) = s * apk + c * phase * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<Eigen::Index> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() < a(y, y).real(); });

    HermitianEigen out;
    out.values.resize(m);
    out.vectors.resize(m, m);
    out.sweeps = sweep;
    for (Eigen::Index k = 0; k < m; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        out.vectors.col(k) = v.col(order[k]);
    }
    return out;
}

CMat tangent_basis(const CVec& g, int pivot, double min_norm)
{
    const Eigen::Index m = g.size();
    if (pivot < 0 || pivot >= m)
        throw Error("tangent_basis: pivot out of range");
    const double norm = g.norm();
    if (!(norm > min_norm))
        throw DomainError("gradient too small for a tangent basis (|g| = " + std::to_string(norm) + ")");

    const CVec normal = g.conjugate() / norm;
    const double mag = std::abs(normal[pivot]);
    const cplx phase = mag > 0.0 ? normal[pivot] / mag : cplx(1.0);
    CVec h = normal;
    h[pivot] += phase;
    const CMat reflector = CMat::Identity(m, m) - (2.0 / h.squaredNorm()) * (h * h.adjoint());

    CMat basis(m, m - 1);
    for (Eigen::Index k = 0, col = 0; k < m; ++k)
        if (k != pivot)
            basis.col(col++) = reflector.col(k);
    return basis;
}

} // namespace worm
