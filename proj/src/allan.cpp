#include "timefence/allan.hpp"

#include <algorithm>
#include <cmath>

namespace timefence::allan {

std::optional<double> AllanCurve::adev_at(double tau) const {
    if (points.empty() || tau <= 0.0) return std::nullopt;
    if (tau < points.front().tau || tau > points.back().tau) return std::nullopt;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].tau == tau) return points[i].adev;
        if (points[i].tau > tau) {
            const auto& a = points[i - 1];
            const auto& b = points[i];
            const double f = (std::log(tau) - std::log(a.tau)) / (std::log(b.tau) - std::log(a.tau));
            return std::exp(std::log(a.adev) + f * (std::log(b.adev) - std::log(a.adev)));
        }
    }
    return std::nullopt;
}

const char* regime_name(NoiseRegime r) {
    switch (r) {
        case NoiseRegime::white: return "white";
        case NoiseRegime::flicker: return "flicker";
        case NoiseRegime::random_walk: return "random_walk";
        case NoiseRegime::drift: return "drift";
        case NoiseRegime::unclassified: return "unclassified";
    }
    return "unclassified";
}

bool NoiseClassification::has(NoiseRegime r) const {
    return std::any_of(decades.begin(), decades.end(),
                       [r](const DecadeFit& d) { return d.regime == r; });
}

std::optional<DecadeFit> NoiseClassification::best(NoiseRegime r) const {
    std::optional<DecadeFit> out;
    for (const auto& d : decades)
        if (d.regime == r && (!out || d.fit_residual < out->fit_residual)) out = d;
    return out;
}

double allan_variance(const osc::PhaseSeries& series, double tau) {
    const double tau0 = series.sample_interval.seconds();
    if (tau0 <= 0.0) throw ConfigError("phase series needs a positive sample interval");
    const double ratio = tau / tau0;
    const auto m = static_cast<std::size_t>(std::llround(ratio));
    if (m < 1 || std::abs(ratio - static_cast<double>(m)) > 1e-9)
        throw ConfigError("tau must be a positive integer multiple of the sample interval");

    const std::size_t n = series.values.size();
    if (n < 2 * m + 1)
        throw InsufficientDataError("phase series shorter than 2*m+1 samples");
    const std::size_t terms = n - 2 * m;
    if (terms < 3)
        throw InsufficientDataError("fewer than 3 second-difference terms at this tau");

    const auto& x = series.values;
    double sum = 0.0;
    for (std::size_t i = 0; i < terms; ++i) {
        const double d = x[i + 2 * m] - 2.0 * x[i + m] + x[i];
        sum += d * d;
    }
    return sum / (2.0 * tau * tau * static_cast<double>(terms));
}

double allan_deviation(const osc::PhaseSeries& series, double tau) {
    return std::sqrt(allan_variance(series, tau));
}

AllanCurve build_curve(const osc::PhaseSeries& series, int decade_lo, int decade_hi) {
    if (decade_hi < decade_lo) throw ConfigError("decade range is inverted");
    const double tau0 = series.sample_interval.seconds();

    AllanCurve curve;
    static constexpr int mantissas[] = {1, 2, 5};
    for (int dec = decade_lo; dec <= decade_hi; ++dec) {
        for (int mant : mantissas) {
            const double mult = mant * std::pow(10.0, dec);
            const auto m = static_cast<std::size_t>(std::llround(mult));
            if (m < 1 || std::abs(mult - static_cast<double>(m)) > 1e-9) continue;
            if (series.values.size() < 2 * m + 3) continue; // < 3 terms: omit
            const double tau = static_cast<double>(m) * tau0;
            const double var = allan_variance(series, tau);
            if (!(var > 0.0)) continue;
            curve.points.push_back({tau, std::sqrt(var), series.values.size() - 2 * m});
        }
    }
    return curve;
}

namespace {

NoiseRegime regime_from_slope(double slope, double flicker_band) {
    if (std::abs(slope) < flicker_band) return NoiseRegime::flicker;
    // Nearest of the remaining slopes; exact ties resolve toward the
    // smaller-tau regime (white < random_walk < drift).
    struct Candidate { double slope; NoiseRegime regime; };
    static constexpr Candidate candidates[] = {
        {-0.5, NoiseRegime::white},
        {0.5, NoiseRegime::random_walk},
        {1.0, NoiseRegime::drift},
    };
    NoiseRegime best = NoiseRegime::unclassified;
    double best_dist = 1e300;
    for (const auto& c : candidates) {
        const double dist = std::abs(slope - c.slope);
        if (dist < best_dist) {
            best_dist = dist;
            best = c.regime;
        }
    }
    return best;
}

} // namespace

NoiseClassification classify_noise(const AllanCurve& curve, const ClassifyConfig& cfg) {
    if (curve.points.size() < 4)
        throw InsufficientDataError("classification needs >= 2 points per decade over >= 2 decades");

    // Bucket points by decade of tau.
    std::map<int, std::vector<const AllanPoint*>> buckets;
    for (const auto& p : curve.points) {
        const int dec = static_cast<int>(std::floor(std::log10(p.tau) + 1e-9));
        buckets[dec].push_back(&p);
    }

    NoiseClassification cls;
    for (const auto& [dec, pts] : buckets) {
        if (pts.size() < 2) continue;
        // Least squares on (log10 tau, log10 adev).
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const auto n = static_cast<double>(pts.size());
        for (const auto* p : pts) {
            const double lx = std::log10(p->tau);
            const double ly = std::log10(p->adev);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        }
        const double denom = n * sxx - sx * sx;
        if (std::abs(denom) < 1e-12) continue;
        const double slope = (n * sxy - sx * sy) / denom;
        const double intercept = (sy - slope * sx) / n;

        double rss = 0.0;
        for (const auto* p : pts) {
            const double r = std::log10(p->adev) - (slope * std::log10(p->tau) + intercept);
            rss += r * r;
        }
        DecadeFit fit;
        fit.tau_mid = std::pow(10.0, sx / n);
        fit.slope = slope;
        fit.fit_residual = std::sqrt(rss / n);
        fit.level_at_1s = std::pow(10.0, intercept);
        fit.regime = fit.fit_residual < cfg.residual_gate ? regime_from_slope(slope, cfg.flicker_band)
                                                          : NoiseRegime::unclassified;
        cls.decades.push_back(fit);
    }

    if (cls.decades.size() < 2)
        throw InsufficientDataError("classification needs fits over >= 2 decades");
    return cls;
}

std::vector<std::vector<std::string>> cluster_sources(
    const std::map<std::string, AllanCurve>& curves, double tau, double band) {
    struct Entry { std::string id; double adev; };
    std::vector<Entry> entries;
    for (const auto& [id, curve] : curves) {
        const auto adev = curve.adev_at(tau);
        if (!adev)
            throw ConfigError("source '" + id + "' has no Allan point interpolable at requested tau");
        entries.push_back({id, *adev});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.adev < b.adev || (a.adev == b.adev && a.id < b.id);
    });

    std::vector<std::vector<std::string>> groups;
    double group_floor = 0.0;
    for (const auto& e : entries) {
        if (groups.empty() || e.adev > group_floor * band) {
            groups.emplace_back();
            group_floor = e.adev;
        }
        groups.back().push_back(e.id);
    }
    return groups;
}

KalmanTuning kalman_params_from_allan(const NoiseClassification& classification, double poll_tau,
                                      const AllanCurve& curve, const TuningDefaults& defaults) {
    KalmanTuning tuning;

    const auto white = classification.best(NoiseRegime::white);
    const auto rw = classification.best(NoiseRegime::random_walk);

    if (white) {
        // adev(tau) = sqrt(q_bias / tau) => level at 1 s squared is q_bias.
        tuning.q_bias = white->level_at_1s * white->level_at_1s;
    }
    if (rw) {
        // adev(tau) = sqrt(q_drift * tau / 3) => q_drift = 3 * level(1s)^2.
        tuning.q_drift = 3.0 * rw->level_at_1s * rw->level_at_1s;
    }

    if (!white) {
        tuning.q_bias = defaults.q_bias;
        tuning.from_defaults = true;
    }
    if (!rw && !white) {
        tuning.q_drift = defaults.q_drift;
    }

    const auto meas = curve.adev_at(poll_tau);
    if (meas) {
        const double time_dev = *meas * poll_tau;
        tuning.r_meas = time_dev * time_dev;
    } else {
        tuning.r_meas = defaults.r_meas;
        tuning.from_defaults = true;
    }
    return tuning;
}

} // namespace timefence::allan
