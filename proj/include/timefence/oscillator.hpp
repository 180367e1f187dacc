#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "timefence/timebase.hpp"

namespace timefence::osc {

// Two-state clock: bias b (s) and fractional-frequency drift d (s/s), driven
// by white-FM and random-walk-FM process noise.
struct ClockState {
    TimeOffset bias;       // b
    double drift = 0.0;    // d, s/s
};

struct OscillatorSpec {
    double q_bias = 0.0;             // white-FM intensity, s^2/s
    double q_drift = 0.0;            // random-walk-FM intensity, s^2/s^3
    double deterministic_aging = 0.0; // s/s^2
    double initial_bias = 0.0;       // s
    double initial_drift = 0.0;      // s/s
    bool disciplined = false;        // bias re-anchored to the PNT solution each valid fix

    void validate() const;
};

// Shipped tiers. The GNSS-disciplined tier shares TCXO noise but is steered to
// the solver output by the scenario runner.
OscillatorSpec tcxo_spec();
OscillatorSpec ocxo_spec();
OscillatorSpec gnss_disciplined_spec();
OscillatorSpec spec_for_tier(const std::string& tier);

// Uniformly sampled phase offsets x_n (seconds) against true time.
struct PhaseSeries {
    TimeOffset sample_interval;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

// Exact discrete-time covariance of the continuous two-state model over dt:
//   Q11 = q_bias*dt + q_drift*dt^3/3, Q12 = q_drift*dt^2/2, Q22 = q_drift*dt.
struct ProcessCovariance {
    double q11 = 0.0;
    double q12 = 0.0;
    double q22 = 0.0;
};

ProcessCovariance discrete_process_covariance(const OscillatorSpec& spec, TimeOffset dt);

// One propagation step:
//   bias'  = bias + drift*dt + aging*dt^2/2 + eta_b
//   drift' = drift + aging*dt + eta_d
// with (eta_b, eta_d) drawn from the exact discrete covariance above.
ClockState propagate(const ClockState& state, const OscillatorSpec& spec, TimeOffset dt, Rng& rng);

// A local clock bound to the simulation timescale: value state plus the
// instant it is valid at.
class TrackedClock {
public:
    TrackedClock(const OscillatorSpec& spec, TimePoint start);

    void propagate_to(TimePoint instant, Rng& rng);
    void reset_bias(TimeOffset bias) { state_.bias = bias; }

    const ClockState& state() const { return state_; }
    const OscillatorSpec& spec() const { return spec_; }
    TimePoint valid_at() const { return valid_at_; }

private:
    OscillatorSpec spec_;
    ClockState state_;
    TimePoint valid_at_;
};

// Inter-scale offset of `clock` against true time at the truth clock's current
// instant. Throws StaleStateError if the clock lags the truth instant.
TimeOffset read_phase_vs(const SimClock& truth, const TrackedClock& clock);

// Convenience synthesis: n phase samples of a clock with the given spec,
// sampled every tau0, optionally with white measurement noise added per point.
PhaseSeries synthesize_phase_series(const OscillatorSpec& spec, TimeOffset tau0, std::size_t n,
                                    Rng& rng, double measurement_sigma = 0.0);

// Flicker-FM stand-in: frequency is a sum of bounded random walks (discrete
// Ornstein-Uhlenbeck components) with correlation times spaced per octave
// across [tau0, ~4^stages*tau0], which flattens the Allan slope to ~0 over the
// covered band. Slope checks against it use the widened +/-0.2 tolerance.
PhaseSeries synthesize_flicker_phase_series(double sigma_y, TimeOffset tau0, std::size_t n,
                                            Rng& rng, int stages = 6);

} // namespace timefence::osc
