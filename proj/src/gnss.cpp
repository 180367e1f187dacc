#include "timefence/gnss.hpp"

#include <cmath>

namespace timefence::gnss {

std::vector<SatelliteGeometry> shell_constellation(std::size_t count, double shell_radius_m,
                                                   Rng& rng, double min_z) {
    if (count == 0) throw ConfigError("constellation needs at least one satellite");
    if (!(shell_radius_m > 0.0)) throw ConfigError("shell radius must be positive");

    std::vector<SatelliteGeometry> sats;
    sats.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        // Uniform direction on the spherical cap z >= min_z.
        const double z = min_z + (1.0 - min_z) * rng.uniform();
        const double az = 2.0 * M_PI * rng.uniform();
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        SatelliteGeometry sat;
        sat.id = static_cast<int>(i);
        sat.position = shell_radius_m * Eigen::Vector3d(r * std::cos(az), r * std::sin(az), z);
        sats.push_back(sat);
    }
    return sats;
}

PseudorangeSet synthesize_pseudoranges(const std::vector<SatelliteGeometry>& geometry,
                                       const Eigen::Vector3d& receiver_pos, TimeOffset true_bias,
                                       Rng& rng, double sigma_m, TimePoint epoch) {
    if (geometry.empty()) throw GeometryError("no satellites to synthesize from");
    PseudorangeSet pr;
    pr.epoch = epoch;
    pr.noise_sigma = sigma_m;
    pr.measured_range.reserve(geometry.size());
    for (const auto& sat : geometry) {
        const double rho = (sat.position - receiver_pos).norm();
        const double p = rho + kSpeedOfLight * (true_bias.seconds() - sat.clock_bias.seconds()) +
                         gauss(rng, sigma_m);
        pr.measured_range.push_back(p);
    }
    return pr;
}

namespace {

void check_sizes(const PseudorangeSet& pr, const std::vector<SatelliteGeometry>& geometry) {
    if (pr.measured_range.size() != geometry.size())
        throw ConfigError("pseudorange set and geometry disagree on satellite count");
}

double consistency_gate(const SolverConfig& cfg, double sigma, std::size_t n, std::size_t u) {
    const double redundancy = static_cast<double>(n) / static_cast<double>(n - u);
    return std::max(cfg.residual_gate_scale * sigma * std::sqrt(redundancy),
                    cfg.residual_gate_floor_m);
}

} // namespace

PntSolution solve_time_bias(const PseudorangeSet& pr, const std::vector<SatelliteGeometry>& geometry,
                            const Eigen::Vector3d& known_pos, const SolverConfig& cfg) {
    check_sizes(pr, geometry);
    const std::size_t n = geometry.size();
    if (n < 1) throw GeometryError("time-only solve needs >= 1 satellite");

    // P - rho + c*dT = c * bias; one unknown, unit design column.
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = (geometry[i].position - known_pos).norm();
        acc += pr.measured_range[i] - rho + kSpeedOfLight * geometry[i].clock_bias.seconds();
    }
    const double bias_m = acc / static_cast<double>(n);

    PntSolution sol;
    sol.position = known_pos;
    sol.clock_bias = seconds(bias_m / kSpeedOfLight);
    sol.utc_time = pr.epoch;
    sol.iterations = 1;

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = (geometry[i].position - known_pos).norm();
        const double r = pr.measured_range[i] -
                         (rho + bias_m - kSpeedOfLight * geometry[i].clock_bias.seconds());
        rss += r * r;
    }
    sol.residual_rms = std::sqrt(rss / static_cast<double>(n));
    sol.fix_valid = n == 1 || sol.residual_rms < consistency_gate(cfg, pr.noise_sigma, n, 1);
    return sol;
}

PntSolution solve_pnt4(const PseudorangeSet& pr, const std::vector<SatelliteGeometry>& geometry,
                       const SolverConfig& cfg) {
    check_sizes(pr, geometry);
    const std::size_t n = geometry.size();
    if (n < 4) throw GeometryError("4-state solve needs >= 4 satellites");

    Eigen::Vector4d state = Eigen::Vector4d::Zero(); // [x y z c*dt]
    PntSolution sol;
    sol.utc_time = pr.epoch;

    Eigen::MatrixXd h(n, 4);
    Eigen::VectorXd residual(n);
    int iter = 0;
    for (; iter < cfg.max_iterations; ++iter) {
        const Eigen::Vector3d pos = state.head<3>();
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Vector3d line = pos - geometry[i].position;
            const double rho = line.norm();
            if (rho < 1.0) throw GeometryError("receiver coincides with a satellite");
            h.row(i) << line.transpose() / rho, 1.0;
            const double predicted =
                rho + state[3] - kSpeedOfLight * geometry[i].clock_bias.seconds();
            residual[i] = pr.measured_range[i] - predicted;
        }

        const Eigen::Matrix4d normal = h.transpose() * h;
        Eigen::FullPivLU<Eigen::Matrix4d> lu(normal);
        if (lu.rank() < 4)
            throw GeometryError("degenerate satellite geometry (rank-deficient design matrix)");
        const Eigen::Vector4d step = lu.solve(h.transpose() * residual);
        state += step;
        if (step.norm() < cfg.convergence_m) {
            ++iter;
            break;
        }
    }

    sol.position = state.head<3>();
    sol.clock_bias = seconds(state[3] / kSpeedOfLight);
    sol.iterations = iter;

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = (sol.position - geometry[i].position).norm();
        const double r = pr.measured_range[i] -
                         (rho + state[3] - kSpeedOfLight * geometry[i].clock_bias.seconds());
        rss += r * r;
    }
    sol.residual_rms = std::sqrt(rss / static_cast<double>(n));

    const bool converged = iter < cfg.max_iterations;
    const bool consistent =
        n == 4 || sol.residual_rms < consistency_gate(cfg, pr.noise_sigma, n, 4);
    sol.fix_valid = converged && consistent;
    return sol;
}

PseudorangeSet inject_spoof(const PseudorangeSet& pr, const std::vector<double>& delta_m) {
    if (delta_m.size() != pr.measured_range.size())
        throw ConfigError("spoof delta count does not match satellite count");
    PseudorangeSet out = pr;
    for (std::size_t i = 0; i < delta_m.size(); ++i) out.measured_range[i] += delta_m[i];
    return out;
}

PseudorangeSet inject_spoof(const PseudorangeSet& pr, double uniform_delta_m) {
    PseudorangeSet out = pr;
    for (auto& p : out.measured_range) p += uniform_delta_m;
    return out;
}

} // namespace timefence::gnss
