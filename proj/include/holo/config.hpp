#pragma once

// Default numerical settings in one place. Calibration notes refer to the
// built-in families at the default manifest settings (see README).

namespace holo::defaults {

/// RK4 steps per segment. At 2048 the Richardson estimate on the built-ins is
/// below 1e-13.
inline constexpr int steps = 2048;

/// Relative singular-value cutoff for the holonomy algebra estimate. Integrator
/// noise sits near 1e-12 relative; genuine directions above 1e-2.
inline constexpr double gap_threshold = 1e-4;
inline constexpr int closure_passes = 1;

/// Side length of the squares used for curvature generators.
inline constexpr double generator_eps = 0.01;

/// Conjugacy search.
inline constexpr int restarts = 32;
inline constexpr int max_iterations = 500;
inline constexpr double classification_tol = 1e-6;

/// Metric compatibility of the Levi-Civita connection at the basepoint.
inline constexpr double compatibility_tol = 1e-6;

/// Grid resolution per axis for sup-distances.
inline constexpr int grid = 21;

/// Random loops for holonomy sampling.
inline constexpr int random_loops = 8;
inline constexpr double random_amplitude = 0.1;

}  // namespace holo::defaults
