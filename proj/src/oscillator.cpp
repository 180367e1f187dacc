#include "timefence/oscillator.hpp"

#include <cmath>

namespace timefence::osc {

void OscillatorSpec::validate() const {
    if (q_bias < 0.0 || q_drift < 0.0)
        throw ConfigError("oscillator noise intensities must be non-negative");
    if (!(std::abs(initial_drift) < 1e-3))
        throw ConfigError("oscillator initial drift out of range (|d| < 1e-3 s/s)");
}

OscillatorSpec tcxo_spec() {
    OscillatorSpec s;
    s.q_bias = 1e-21;
    s.q_drift = 1e-26;
    return s;
}

OscillatorSpec ocxo_spec() {
    OscillatorSpec s;
    s.q_bias = 1e-24;
    s.q_drift = 1e-30;
    return s;
}

OscillatorSpec gnss_disciplined_spec() {
    OscillatorSpec s = tcxo_spec();
    s.disciplined = true;
    return s;
}

OscillatorSpec spec_for_tier(const std::string& tier) {
    if (tier == "tcxo") return tcxo_spec();
    if (tier == "ocxo") return ocxo_spec();
    if (tier == "gnss_disciplined") return gnss_disciplined_spec();
    throw ConfigError("unknown oscillator tier: " + tier);
}

ProcessCovariance discrete_process_covariance(const OscillatorSpec& spec, TimeOffset dt) {
    const double h = dt.seconds();
    ProcessCovariance q;
    q.q11 = spec.q_bias * h + spec.q_drift * h * h * h / 3.0;
    q.q12 = spec.q_drift * h * h / 2.0;
    q.q22 = spec.q_drift * h;
    return q;
}

ClockState propagate(const ClockState& state, const OscillatorSpec& spec, TimeOffset dt, Rng& rng) {
    if (!(dt > TimeOffset{}))
        throw ConfigError("propagate requires dt > 0");

    const double h = dt.seconds();
    const ProcessCovariance q = discrete_process_covariance(spec, dt);

    // Cholesky factor of Q; degenerate axes collapse to zero draws.
    double eta_b = 0.0;
    double eta_d = 0.0;
    if (q.q11 > 0.0) {
        const double l11 = std::sqrt(q.q11);
        const double l21 = q.q12 / l11;
        const double l22s = q.q22 - l21 * l21;
        const double l22 = l22s > 0.0 ? std::sqrt(l22s) : 0.0;
        const double z1 = gauss(rng, 1.0);
        const double z2 = gauss(rng, 1.0);
        eta_b = l11 * z1;
        eta_d = l21 * z1 + l22 * z2;
    } else if (q.q22 > 0.0) {
        eta_d = gauss(rng, std::sqrt(q.q22));
    }

    ClockState next;
    next.bias = state.bias + seconds(state.drift * h + spec.deterministic_aging * h * h / 2.0 + eta_b);
    next.drift = state.drift + spec.deterministic_aging * h + eta_d;
    return next;
}

TrackedClock::TrackedClock(const OscillatorSpec& spec, TimePoint start)
    : spec_(spec), valid_at_(start) {
    spec_.validate();
    state_.bias = seconds(spec.initial_bias);
    state_.drift = spec.initial_drift;
}

void TrackedClock::propagate_to(TimePoint instant, Rng& rng) {
    if (instant < valid_at_)
        throw StaleStateError("clock cannot be propagated backwards");
    if (instant == valid_at_) return;
    state_ = propagate(state_, spec_, instant - valid_at_, rng);
    valid_at_ = instant;
}

TimeOffset read_phase_vs(const SimClock& truth, const TrackedClock& clock) {
    if (clock.valid_at() != truth.now())
        throw StaleStateError("clock state lags the truth instant; propagate first");
    return clock.state().bias;
}

PhaseSeries synthesize_phase_series(const OscillatorSpec& spec, TimeOffset tau0, std::size_t n,
                                    Rng& rng, double measurement_sigma) {
    PhaseSeries series;
    series.sample_interval = tau0;
    series.values.reserve(n);
    ClockState state;
    state.bias = seconds(spec.initial_bias);
    state.drift = spec.initial_drift;
    for (std::size_t i = 0; i < n; ++i) {
        series.values.push_back(state.bias.seconds() + gauss(rng, measurement_sigma));
        state = propagate(state, spec, tau0, rng);
    }
    return series;
}

PhaseSeries synthesize_flicker_phase_series(double sigma_y, TimeOffset tau0, std::size_t n,
                                            Rng& rng, int stages) {
    PhaseSeries series;
    series.sample_interval = tau0;
    series.values.reserve(n);

    // Per-octave AR(1) components with equal stationary variance; their sum
    // approximates a 1/f frequency spectrum between tau0 and ~4^stages*tau0.
    std::vector<double> a(stages), b(stages), y(stages, 0.0);
    const double per_stage_var = sigma_y * sigma_y / static_cast<double>(stages);
    for (int j = 0; j < stages; ++j) {
        const double corr_time = std::pow(4.0, j);
        a[j] = std::exp(-1.0 / corr_time);
        b[j] = std::sqrt(per_stage_var * (1.0 - a[j] * a[j]));
    }

    double phase = 0.0;
    const double h = tau0.seconds();
    for (std::size_t i = 0; i < n; ++i) {
        series.values.push_back(phase);
        double freq = 0.0;
        for (int j = 0; j < stages; ++j) {
            y[j] = a[j] * y[j] + gauss(rng, b[j]);
            freq += y[j];
        }
        phase += freq * h;
    }
    return series;
}

} // namespace timefence::osc
