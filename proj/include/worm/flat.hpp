#pragma once

// Scalar flat functions used by the construction: the infinitely flat
// theta(x) = exp(-1/x) (x > 0), a smoothstep built from it, and the bump
// profile chi used by the Diederich-Fornaess worm.

namespace worm {

/// Value with first and second derivative of a real function of one variable.
struct Taylor2 {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Below this argument theta and both derivatives are returned as exact zeros
/// (exp(-709) is the last normal double).
inline constexpr double kThetaUnderflow = 1.0 / 709.0;

Taylor2 theta(double x);

/// theta(y) / (theta(y) + theta(1 - y)): 0 for y <= 0, 1 for y >= 1.
Taylor2 smoothstep(double y);

struct ChiParams {
    double a1 = -2.0;
    double b1 = -1.0;
    double a2 = 1.0;
    double b2 = 2.0;
    double M = 2.0;

    /// Throws ConfigError unless a1 < b1 <= a2 < b2 and M >= 1.
    void validate() const;
};

/// M * (smoothstep((x - a2)/(b2 - a2)) + smoothstep((b1 - x)/(b1 - a1))).
/// Identically zero on [b1, a2], equal to M at a1 and b2, monotone outside.
Taylor2 chi(double x, const ChiParams& p);

} // namespace worm
