#include "magnon/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace magnon {

std::vector<ClassicalSample> classical_trajectory(const ControlProtocol& protocol,
                                                  ClassicalState initial, double t_f, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("classical_trajectory: dt must be positive");
    if (!(t_f >= 0.0)) throw std::invalid_argument("classical_trajectory: t_f must be >= 0");

    auto acceleration = [&](double t, double x) {
        return -protocol.squared_frequency(t) * (x - protocol.position(t));
    };

    const long steps = std::max(1L, static_cast<long>(std::ceil(t_f / dt - 1e-9)));
    const double h = t_f / static_cast<double>(steps);
    std::vector<ClassicalSample> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    out.push_back({0.0, initial});

    double x = initial.position;
    double v = initial.velocity;
    for (long k = 0; k < steps; ++k) {
        const double t = h * static_cast<double>(k);
        const double t_mid = t + 0.5 * h;
        const double t_next = (k + 1 == steps) ? t_f : t + h;

        const double k1x = v;
        const double k1v = acceleration(t, x);
        const double k2x = v + 0.5 * h * k1v;
        const double k2v = acceleration(t_mid, x + 0.5 * h * k1x);
        const double k3x = v + 0.5 * h * k2v;
        const double k3v = acceleration(t_mid, x + 0.5 * h * k2x);
        const double k4x = v + h * k3v;
        const double k4v = acceleration(t_next, x + h * k3x);

        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (!std::isfinite(x) || !std::isfinite(v)) {
            throw std::runtime_error("classical_trajectory: blow-up at t=" + std::to_string(t_next));
        }
        out.push_back({t_next, {x, v}});
    }
    return out;
}

double continuum_fidelity(double delta_x, double delta_p, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("continuum_fidelity: sigma must be positive");
    return std::exp(-delta_x * delta_x / (2.0 * sigma * sigma) -
                    delta_p * delta_p * sigma * sigma / (2.0 * kHbar * kHbar));
}

std::vector<DeviationSample> ehrenfest_deviation(const Trajectory& chain_trajectory,
                                                 const ChainSpec& chain,
                                                 const std::vector<ClassicalSample>& classical) {
    if (classical.empty()) throw std::invalid_argument("ehrenfest_deviation: empty classical path");
    const double t_lo = classical.front().time;
    const double t_hi = classical.back().time;
    const double slack = 1e-9 * std::max(1.0, t_hi);

    std::vector<DeviationSample> out;
    out.reserve(chain_trajectory.size());
    for (const WaveState& psi : chain_trajectory) {
        const double t = psi.time;
        if (t < t_lo - slack || t > t_hi + slack) {
            throw std::invalid_argument("ehrenfest_deviation: chain time " + std::to_string(t) +
                                        " outside classical range");
        }
        auto upper = std::lower_bound(classical.begin(), classical.end(), t,
                                      [](const ClassicalSample& s, double v) { return s.time < v; });
        double x_classical;
        if (upper == classical.begin()) {
            x_classical = upper->state.position;
        } else if (upper == classical.end()) {
            x_classical = classical.back().state.position;
        } else {
            const auto lower = std::prev(upper);
            const double w = (t - lower->time) / (upper->time - lower->time);
            x_classical = (1.0 - w) * lower->state.position + w * upper->state.position;
        }
        const double x_chain = centroid(psi, chain);
        out.push_back({t, x_chain, x_classical, std::abs(x_chain - x_classical)});
    }
    return out;
}

}  // namespace magnon
