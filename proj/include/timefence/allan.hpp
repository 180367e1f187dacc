#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "timefence/oscillator.hpp"

namespace timefence::allan {

struct AllanPoint {
    double tau = 0.0;   // integration time, seconds
    double adev = 0.0;  // sigma_y(tau), dimensionless
    std::size_t n_terms = 0;
};

struct AllanCurve {
    std::vector<AllanPoint> points; // taus strictly increasing

    std::optional<double> adev_at(double tau) const; // log-log interpolation
};

enum class NoiseRegime { white, flicker, random_walk, drift, unclassified };

const char* regime_name(NoiseRegime r);

struct DecadeFit {
    double tau_mid = 0.0;        // geometric mid-tau of the decade
    double slope = 0.0;          // fitted log10(adev) vs log10(tau) slope
    double fit_residual = 0.0;   // RMS residual of the fit in log-log
    NoiseRegime regime = NoiseRegime::unclassified;
    double level_at_1s = 0.0;    // fitted adev extrapolated to tau = 1 s
};

struct NoiseClassification {
    std::vector<DecadeFit> decades;

    bool has(NoiseRegime r) const;
    std::optional<DecadeFit> best(NoiseRegime r) const; // lowest-residual decade of that regime
};

// Overlapping Allan variance at tau = m * sample_interval:
//   sigma_y^2(m tau0) = sum_n (x_{n+2m} - 2 x_{n+m} + x_n)^2 / (2 (m tau0)^2 (N - 2m))
// Requires N >= 2m+1 and at least 3 contributing terms.
double allan_variance(const osc::PhaseSeries& series, double tau);
double allan_deviation(const osc::PhaseSeries& series, double tau);

// Curve over a 1-2-5 grid of integer multiples of the sample interval covering
// [10^decade_lo, 10^decade_hi] * tau0. Points with fewer than 3 terms are
// omitted, never extrapolated.
AllanCurve build_curve(const osc::PhaseSeries& series, int decade_lo, int decade_hi);

struct ClassifyConfig {
    double residual_gate = 0.15;   // log-log RMS residual above which a decade is unclassified
    double flicker_band = 0.2;     // |slope| < band reads as flicker
};

// Per-decade least-squares slope in log-log, mapped to the nearest regime in
// {-0.5, 0, +0.5, +1}. Needs >= 2 points per decade over >= 2 decades.
NoiseClassification classify_noise(const AllanCurve& curve, const ClassifyConfig& cfg = {});

// Sources whose adev at tau lies within a multiplicative band share a group;
// groups are ordered best (lowest adev) first.
std::vector<std::vector<std::string>> cluster_sources(
    const std::map<std::string, AllanCurve>& curves, double tau, double band = 3.0);

struct KalmanTuning {
    double q_bias = 0.0;   // s^2/s
    double q_drift = 0.0;  // s^2/s^3
    double r_meas = 0.0;   // s^2
    bool from_defaults = false; // regimes missing; values fell back to defaults
};

struct TuningDefaults {
    double q_bias = 1e-18;
    double q_drift = 1e-24;
    double r_meas = 1e-18;
};

// Two-state correspondences used here (tau in seconds):
//   white decade:       sigma_y^2(tau) = q_bias / tau      => q_bias  = adev^2 * tau
//   random-walk decade: sigma_y^2(tau) = q_drift * tau / 3 => q_drift = 3 * adev^2 / tau
//   measurement:        R = (adev(tau_poll) * tau_poll)^2  (time-equivalent deviation
//                       of the measurement channel at the poll interval)
KalmanTuning kalman_params_from_allan(const NoiseClassification& classification, double poll_tau,
                                      const AllanCurve& curve, const TuningDefaults& defaults = {});

} // namespace timefence::allan
