#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>

#include "timefence/errors.hpp"

namespace timefence {

// Signed offset between two instants, in real seconds. Timestamps stay on an
// integer-nanosecond grid (see TimePoint); offsets are real-valued because the
// statistics operate on them.
class TimeOffset {
public:
    constexpr TimeOffset() = default;

    static constexpr TimeOffset from_seconds(double s) { return TimeOffset(s); }
    static constexpr TimeOffset from_nanos(std::int64_t ns) {
        return TimeOffset(static_cast<double>(ns) * 1e-9);
    }

    constexpr double seconds() const { return seconds_; }
    std::int64_t to_nanos() const { return llround_checked(seconds_ * 1e9); }

    constexpr TimeOffset operator-() const { return TimeOffset(-seconds_); }
    constexpr TimeOffset operator+(TimeOffset o) const { return TimeOffset(seconds_ + o.seconds_); }
    constexpr TimeOffset operator-(TimeOffset o) const { return TimeOffset(seconds_ - o.seconds_); }
    constexpr TimeOffset operator*(double k) const { return TimeOffset(seconds_ * k); }
    constexpr TimeOffset operator/(double k) const { return TimeOffset(seconds_ / k); }
    TimeOffset& operator+=(TimeOffset o) { seconds_ += o.seconds_; return *this; }
    TimeOffset& operator-=(TimeOffset o) { seconds_ -= o.seconds_; return *this; }

    constexpr auto operator<=>(const TimeOffset&) const = default;

private:
    explicit constexpr TimeOffset(double s) : seconds_(s) {}

    static std::int64_t llround_checked(double ns) {
        if (!(std::abs(ns) < 9.2e18))
            throw ConfigError("time offset exceeds the nanosecond range");
        return std::llround(ns);
    }

    double seconds_ = 0.0;
};

constexpr TimeOffset operator*(double k, TimeOffset o) { return o * k; }
inline TimeOffset abs(TimeOffset o) { return TimeOffset::from_seconds(std::abs(o.seconds())); }

inline TimeOffset seconds(double s) { return TimeOffset::from_seconds(s); }
inline TimeOffset milliseconds(double ms) { return TimeOffset::from_seconds(ms * 1e-3); }
inline TimeOffset microseconds(double us) { return TimeOffset::from_seconds(us * 1e-6); }
inline TimeOffset nanoseconds(double ns) { return TimeOffset::from_seconds(ns * 1e-9); }

// Instant on the simulation timescale: integer nanoseconds since the scenario
// epoch (t=0 at scenario start). Absolute UTC, when a report needs it, is this
// count plus a configured anchor; attack math never touches the calendar.
class TimePoint {
public:
    constexpr TimePoint() = default;

    static constexpr TimePoint from_nanos(std::int64_t ns) { return TimePoint(ns); }
    static TimePoint from_seconds(double s) {
        if (!(std::abs(s) < 9.2e9)) throw ConfigError("timestamp exceeds the simulated epoch range");
        return TimePoint(std::llround(s * 1e9));
    }

    constexpr std::int64_t epoch_nanos() const { return nanos_; }
    constexpr double seconds() const { return static_cast<double>(nanos_) * 1e-9; }

    TimePoint operator+(TimeOffset o) const { return shifted(o.to_nanos()); }
    TimePoint operator-(TimeOffset o) const { return shifted(-o.to_nanos()); }
    constexpr TimeOffset operator-(TimePoint other) const {
        return TimeOffset::from_nanos(nanos_ - other.nanos_);
    }

    constexpr auto operator<=>(const TimePoint&) const = default;

private:
    explicit constexpr TimePoint(std::int64_t ns) : nanos_(ns) {}

    TimePoint shifted(std::int64_t dns) const {
        std::int64_t out = 0;
        if (__builtin_add_overflow(nanos_, dns, &out))
            throw ConfigError("scenario too long: timestamp overflows the nanosecond epoch");
        return TimePoint(out);
    }

    std::int64_t nanos_ = 0;
};

// Deterministic stream generator: xoshiro256++ seeded through splitmix64.
// The algorithm is fixed here (not delegated to <random> engines/distributions)
// so equal seeds give bit-identical sequences on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : state_) w = splitmix64(x);
        has_spare_ = false;
    }

    // Independent child stream, stable under reordering of sibling draws.
    Rng substream(std::uint64_t index) const {
        std::uint64_t x = state_[0] ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        return Rng(splitmix64(x));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log() argument.
    double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t state_[4] = {};
    bool has_spare_ = false;
    double spare_ = 0.0;

    friend double gauss(Rng& rng, double sigma);
};

// Zero-mean normal deviate via Box-Muller with a cached spare. sigma == 0
// returns exactly 0 without consuming stream state.
inline double gauss(Rng& rng, double sigma) {
    if (sigma == 0.0) return 0.0;
    if (rng.has_spare_) {
        rng.has_spare_ = false;
        return rng.spare_ * sigma;
    }
    const double u1 = rng.uniform_open();
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    rng.spare_ = r * std::sin(a);
    rng.has_spare_ = true;
    return r * std::cos(a) * sigma;
}

// Single-owner simulation clock; the one writer of simulated "true" time.
class SimClock {
public:
    SimClock() = default;
    explicit SimClock(TimePoint start) : now_(start) {}

    TimePoint now() const { return now_; }

    TimePoint advance(TimeOffset dt) {
        if (!(dt > TimeOffset{}))
            throw ConfigError("SimClock::advance requires dt > 0");
        now_ = now_ + dt;
        return now_;
    }

private:
    TimePoint now_;
};

} // namespace timefence
