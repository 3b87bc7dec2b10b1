#pragma once

#include "levytrim/levy_measure.hpp"

#include <string>

namespace levytrim {

/// Parses a measure document:
///
///   {"name": "<catalog id>", "params": {"alpha": 1.5}}
///   {"custom": {"gamma": g, "sigma2": s, "tail_plus": T, "tail_minus": T,
///               "infinite_activity_plus": bool, "infinite_activity_minus": bool}}
///
/// with tail objects T of the kinds
///
///   {"kind": "none"}
///   {"kind": "powerlaw", "c": c, "alpha": a}                  Π̄(x) = c x^{-a}
///   {"kind": "atoms", "atoms": [[x, m], ...]}
///   {"kind": "table", "interpolation": "step", "points": [[x, T], ...]}
///       Π̄(x) = T_i on [x_i, x_{i+1}), T_0 below x_0; the last T must be 0.
///   {"kind": "table", "interpolation": "loglinear", "points": [[x, T], ...]}
///       log Π̄ linear in log x on [x_i, x_{i+1}], the first segment extended down to 0,
///       and Π̄ = 0 from the last knot on (an atom of mass T_last sits there). All T > 0.
///
/// Knots must be strictly increasing in x and nonincreasing in T. Missing activity flags are
/// inferred from Π̄±(0+). Errors raise ConfigError.
LevyMeasureSpec measure_from_json(const std::string& text);

/// Accepts a catalog id, an inline JSON document or a path to a JSON file.
LevyMeasureSpec resolve_measure(const std::string& arg);

}  // namespace levytrim
