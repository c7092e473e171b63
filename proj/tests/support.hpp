#pragma once

// Test-only helpers: random field expressions, finite-difference Wirtinger
// derivatives and small spec builders.

#include <random>
#include <string>

#include "worm/expr.hpp"
#include "worm/geometry.hpp"

namespace worm::testing {

/// Random expression text over z1..zn, w1..wd.  Every generated field is
/// smooth on all of C^(n+d): divisions and logarithms are guarded by 1 + |.|^2.
std::string random_expression(std::mt19937_64& rng, int n, int d, int depth);

CVec random_point(std::mt19937_64& rng, int dim, double radius = 1.0);

struct FiniteDifferenceJet {
    CVec del;
    CVec delbar;
    CMat mixed;
};

/// Central differences of the value (for del, delbar) and of the jet's del (for
/// mixed), step h along Re and Im of each coordinate.
FiniteDifferenceJet finite_difference(const FieldExpr& e, const CVec& p, double h = 1e-5,
                                      const Bindings& b = {});

/// max |a - b| / max(1, max |b|) over all entries.
double relative_error(const CMat& a, const CMat& b);
double relative_error(const CVec& a, const CVec& b);

/// The spec files shipped with the repository.
std::string spec_path(const std::string& name);
std::string data_path(const std::string& name);

} // namespace worm::testing
