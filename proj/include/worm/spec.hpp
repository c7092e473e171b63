#pragma once

// Construction inputs for a worm domain and the run settings that travel with
// them in a spec file.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "worm/expr.hpp"
#include "worm/flat.hpp"

namespace worm {

/// Base region the grids are laid over.  Box: a lattice on the real coordinates
/// (Re z1, Im z1, Re z2, ...).  Annulus: a log-polar lattice in z1 (uniform in
/// log|z1| and arg z1) times a box lattice in z2..zn.
struct BaseDomain {
    enum class Kind { Box, Annulus };

    Kind kind = Kind::Box;
    std::vector<double> lo; ///< box bounds, 2n values (annulus: 2(n-1) for z2..zn)
    std::vector<double> hi;
    double log_r_min = -1.0; ///< annulus only
    double log_r_max = 1.0;
    int radial = 32;  ///< annulus radial count
    int angular = 32; ///< annulus angular count
    int points = 32;  ///< box points per real dimension

    /// Same region with every count replaced by `per_dim`.
    BaseDomain with_resolution(int per_dim) const;

    /// Lattice points, grid-major, deterministic order.
    std::vector<CVec> grid(int n) const;

    /// Uniform point in the (log-polar / box) parameter space.
    CVec random_point(int n, std::mt19937_64& rng) const;

    /// Throws ConfigError on inconsistent bounds or counts.
    void validate(int n) const;
};

/// Closed curve s -> z(s), s in [0, 2 pi * winding], one expression per base
/// coordinate in the variable `s`.
struct LoopSpec {
    std::string name;
    std::vector<std::string> z;
    int winding = 1;
    int segments = 512;
};

struct Tolerances {
    double tol_psc = 1e-9;       ///< pseudoconvexity: min eigenvalue >= -tol_psc
    double zero_tol = 1e-7;      ///< zero band half-width
    double strong_margin = 1e-6; ///< off-core: min eigenvalue >= strong_margin
    double core_w = 1e-9;        ///< on-core: |w| <= core_w ...
    double core_eta = 1e-12;     ///< ... and eta <= core_eta
    double cap_gradient = 1e-12; ///< |dr| below this: near-cap sample, excluded
    double period_oracle = 1e-8;   ///< |integrated - oracle| / max(1, |oracle|)
    double period_expected = 1e-5; ///< |integrated - closed form|
};

struct ConstantSettings {
    int grid_points = 64;          ///< per real dimension, for the lemma grids
    double step_fraction = 0.1;    ///< K search step as a fraction of the start K
    int max_attempts = 20;
    int level_grid_points = 0;     ///< regular-value grid; 0 = grid_points
    double level_delta = 0.5;      ///< near-level band, as a fraction of max R on the grid
    double level_tol = 1e-3;       ///< gradient margin, as a fraction of max R on the grid
    std::optional<double> k_start; ///< optional first K to test (raised to the lower bound)
};

struct SamplingSettings {
    int sphere = 32; ///< fiber directions per base point
};

enum class WormKind { General, DiederichFornaess };

struct WormSpec {
    WormKind kind = WormKind::General;
    int n = 1;
    int codim = 1;
    std::string u = "0";
    std::string sigma;
    std::string d_def;
    std::optional<ChiParams> chi;
    std::optional<double> K; ///< empty means "auto"
    double t = 1.0;
    BaseDomain base_domain;
    Bindings params; ///< extra named constants usable in every field
    std::vector<LoopSpec> loops;
    SamplingSettings sampling;
    Tolerances tolerances;
    ConstantSettings constants;

    Variables vars() const { return Variables{n, codim, false}; }
    /// params plus t.
    Bindings bindings() const;
    /// Throws ConfigError if the spec is structurally invalid.
    void validate() const;
};

} // namespace worm
