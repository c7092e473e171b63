#pragma once

// JSON form of WormSpec.  Unknown keys are rejected.
//
//   {
//     "kind": "general" | "diederich_fornaess",
//     "n": 1, "codim": 2,
//     "u": "t*log_abs2(z1)", "sigma": "...", "d_def": "...",
//     "chi": {"a1": -2, "b1": -1, "a2": 1, "b2": 2, "M": 2},
//     "K": 60.0 | "auto",
//     "t": 1.0,
//     "params": {"name": value},
//     "base_domain": {"kind": "box", "lo": [...], "hi": [...], "points": 32}
//                  | {"kind": "annulus", "log_r": [min, max], "radial": 32, "angular": 32,
//                     "lo": [...], "hi": [...], "points": 8},
//     "loops": [{"name": "unit", "z": ["exp(i*s)"], "winding": 1, "segments": 512}],
//     "sampling": {"sphere": 32},
//     "tolerances": {"tol_psc": 1e-9, ...},
//     "constants": {"grid_points": 64, ...}
//   }

#include <filesystem>
#include <string>

#include <json.hpp>

#include "worm/spec.hpp"

namespace worm {

/// Throws ConfigError on missing, mistyped or unknown fields.
WormSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const WormSpec& spec);

/// Throws ConfigError if the file cannot be read or parsed.
WormSpec load_spec(const std::filesystem::path& path);

} // namespace worm
