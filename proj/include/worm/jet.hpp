#pragma once

// Second-order Wirtinger jets.
//
// A Jet2 carries the value of a complex field f on an open subset of C^m together
// with its holomorphic gradient (df/dz_j), antiholomorphic gradient (df/dzbar_k)
// and the mixed Hessian d^2 f / dz_j dzbar_k.  Pure d^2/dz_j dz_k terms are not
// tracked: the algebra is closed without them because conjugation swaps the two
// gradients and every composition below only feeds mixed terms into mixed terms.

#include <complex>
#include <concepts>
#include <span>

#include <Eigen/Dense>

#include "worm/flat.hpp"

namespace worm {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

struct Jet2 {
    cplx value{0.0, 0.0};
    CVec del;    ///< df/dz_j
    CVec delbar; ///< df/dzbar_k
    CMat mixed;  ///< d^2 f / dz_j dzbar_k, row j, column k

    Jet2() = default;
    explicit Jet2(int m);

    static Jet2 constant(cplx c, int m);

    /// The coordinate function z_index (1-based) at `point`.
    static Jet2 coordinate(int index, const CVec& point);

    int dim() const noexcept { return static_cast<int>(del.size()); }

    /// Real value, delbar == conj(del) and Hermitian mixed part, all within `tol`
    /// relative to max(1, |entry|).
    bool is_real(double tol = 1e-10) const;
};

Jet2 operator+(const Jet2& f, const Jet2& g);
Jet2 operator-(const Jet2& f, const Jet2& g);
Jet2 operator-(const Jet2& f);
Jet2 operator*(const Jet2& f, const Jet2& g);
Jet2 operator*(cplx c, const Jet2& f);
Jet2 operator/(const Jet2& f, const Jet2& g);

Jet2 conj(const Jet2& f);
Jet2 re(const Jet2& f);
Jet2 im(const Jet2& f);
Jet2 abs2(const Jet2& f);

/// Throws DomainError when |f| vanishes.
Jet2 recip(const Jet2& f);
Jet2 exp_c(const Jet2& f);
/// log |f|^2; throws DomainError when f vanishes.
Jet2 log_abs2(const Jet2& f);
/// f^p for integer p; negative p requires f != 0.
Jet2 pow_int(const Jet2& f, int p);

/// g(f) for a holomorphic scalar g given g, g', g'' at f.value.
Jet2 compose_holomorphic(const Jet2& f, cplx g, cplx g1, cplx g2);

/// g(f) for a real scalar g and a real-valued jet f.  Throws DomainError if f is
/// not real to within 1e-10.
Jet2 compose_real(const Jet2& f, const Taylor2& g_at_f);

template <typename F>
    requires std::invocable<F, double>
Jet2 compose_real(const Jet2& f, F&& g)
{
    return compose_real(f, g(f.value.real()));
}

} // namespace worm
