#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "timefence/timebase.hpp"

namespace timefence::gnss {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s, exact

struct SatelliteGeometry {
    int id = 0;
    Eigen::Vector3d position = Eigen::Vector3d::Zero(); // meters, fixed frame
    TimeOffset clock_bias;                              // satellite clock bias dT
};

struct PseudorangeSet {
    std::vector<double> measured_range; // meters, one per satellite
    TimePoint epoch;
    double noise_sigma = 0.0; // meters
};

struct PntSolution {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    TimeOffset clock_bias;       // receiver bias dt_r
    TimePoint utc_time;
    bool fix_valid = false;
    double residual_rms = 0.0;   // meters
    int iterations = 0;
};

// Static shell constellation: `count` satellites on a sphere of radius
// `shell_radius_m` around the origin, directions drawn above a minimum
// z-component so the 4-state geometry stays well conditioned.
std::vector<SatelliteGeometry> shell_constellation(std::size_t count, double shell_radius_m,
                                                   Rng& rng, double min_z = 0.15);

// P = |sat - rx| + c*(true_bias - dT) + N(0, sigma). No atmospheric terms.
PseudorangeSet synthesize_pseudoranges(const std::vector<SatelliteGeometry>& geometry,
                                       const Eigen::Vector3d& receiver_pos, TimeOffset true_bias,
                                       Rng& rng, double sigma_m, TimePoint epoch = {});

struct SolverConfig {
    double residual_gate_scale = 5.0; // gate = scale * sigma * sqrt(n/(n-u))
    double residual_gate_floor_m = 1e-3;
    int max_iterations = 10;
    double convergence_m = 1e-9; // Gauss-Newton step norm threshold
};

// Time-only least squares with known receiver position (static timing
// receiver). >= 1 satellite. fix_valid clears when residual RMS exceeds the
// consistency gate.
PntSolution solve_time_bias(const PseudorangeSet& pr, const std::vector<SatelliteGeometry>& geometry,
                            const Eigen::Vector3d& known_pos, const SolverConfig& cfg = {});

// Full 4-state Gauss-Newton [x y z c*dt]. >= 4 satellites, non-degenerate
// geometry. Non-convergence yields fix_valid = false.
PntSolution solve_pnt4(const PseudorangeSet& pr, const std::vector<SatelliteGeometry>& geometry,
                       const SolverConfig& cfg = {});

// P' = P + delta, one delta per satellite. A uniform delta moves only the
// solved time component.
PseudorangeSet inject_spoof(const PseudorangeSet& pr, const std::vector<double>& delta_m);
PseudorangeSet inject_spoof(const PseudorangeSet& pr, double uniform_delta_m);

} // namespace timefence::gnss
