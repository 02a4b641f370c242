#include "magnon/control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace magnon {

namespace {

void require_positive_duration(double t_f) {
    if (!(t_f > 0.0) || !std::isfinite(t_f)) {
        throw std::invalid_argument("protocol duration must be positive, got " +
                                    std::to_string(t_f));
    }
}

// Quintic in s = t / t_f mapped onto an interval [from, to], with
// derivatives taken with respect to t.
Jet quintic_bridge(double t, double t_f, double from, double to) {
    const Jet s = quintic_smoothstep(t / t_f);
    const double span = to - from;
    return {from + span * s.value, span * s.first / t_f, span * s.second / (t_f * t_f)};
}

}  // namespace

ControlProtocol::ControlProtocol(double duration, Function trajectory, Function squared_frequency,
                                 std::string label, std::map<std::string, double> parameters)
    : duration_(duration),
      trajectory_(std::move(trajectory)),
      squared_frequency_(std::move(squared_frequency)),
      label_(std::move(label)),
      parameters_(std::move(parameters)) {
    require_positive_duration(duration_);
}

bool ControlProtocol::contains(double t) const {
    const double slack = 1e-12 * duration_;
    return t >= -slack && t <= duration_ + slack;
}

double ControlProtocol::clamp_checked(double t) const {
    if (!contains(t)) {
        throw std::out_of_range("protocol '" + label_ + "': t=" + std::to_string(t) +
                                " outside [0, " + std::to_string(duration_) + "]");
    }
    return std::clamp(t, 0.0, duration_);
}

double ControlProtocol::position(double t) const { return trajectory_(clamp_checked(t)); }

double ControlProtocol::squared_frequency(double t) const {
    return squared_frequency_(clamp_checked(t));
}

DivisionHazard::DivisionHazard(double time, double squared_frequency)
    : std::domain_error([&] {
          std::ostringstream os;
          os << "inverse engineering: omega^2=" << squared_frequency << " at t=" << time
             << " is below the division floor while X_c'' is non-zero";
          return os.str();
      }()),
      time_(time),
      squared_frequency_(squared_frequency) {}

Jet quintic_smoothstep(double s) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return {
        s3 * (10.0 + s * (-15.0 + 6.0 * s)),
        s2 * (30.0 + s * (-60.0 + 30.0 * s)),
        s * (60.0 + s * (-180.0 + 120.0 * s)),
    };
}

ControlProtocol linear_ramp(const TrapConfig& trap, double t_f) {
    require_positive_duration(t_f);
    const double x_a = trap.x_start;
    const double d = trap.distance;
    const double w2 = trap.omega0 * trap.omega0;
    return ControlProtocol(
        t_f, [=](double t) { return x_a + (t / t_f) * d; }, [=](double) { return w2; },
        "linear", {{"omega0", trap.omega0}, {"x_start", x_a}, {"distance", d}, {"tf", t_f}});
}

ControlProtocol sta_polynomial(const TrapConfig& trap, double t_f) {
    require_positive_duration(t_f);
    if (!(trap.omega0 > 0.0)) throw std::invalid_argument("sta_polynomial: omega0 must be positive");
    const double x_a = trap.x_start;
    const double d = trap.distance;
    const double w2 = trap.omega0 * trap.omega0;
    const double correction = 60.0 / (w2 * t_f * t_f);
    return ControlProtocol(
        t_f,
        [=](double t) {
            const double s = t / t_f;
            const double quintic = s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
            return x_a + d * (quintic + correction * s * (1.0 - 3.0 * s + 2.0 * s * s));
        },
        [=](double) { return w2; }, "sta",
        {{"omega0", trap.omega0}, {"x_start", x_a}, {"distance", d}, {"tf", t_f}});
}

ControlProtocol stationary_trap(const TrapConfig& trap, double duration, double centre) {
    const double w2 = trap.omega0 * trap.omega0;
    return ControlProtocol(
        duration, [=](double) { return centre; }, [=](double) { return w2; }, "stationary",
        {{"omega0", trap.omega0}, {"centre", centre}, {"tf", duration}});
}

ControlProtocol time_reversed(const ControlProtocol& protocol) {
    const double t_f = protocol.duration();
    auto params = protocol.parameters();
    params["reversed"] = 1.0;
    return ControlProtocol(
        t_f, [protocol, t_f](double t) { return protocol.position(t_f - t); },
        [protocol, t_f](double t) { return protocol.squared_frequency(t_f - t); },
        protocol.label() + "-reversed", std::move(params));
}

AuxiliaryAnsatz polynomial_xc(const TrapConfig& trap, double t_f) {
    require_positive_duration(t_f);
    AuxiliaryAnsatz ansatz;
    ansatz.gamma = std::sqrt(trap.omega0 / trap.final_frequency());
    ansatz.x_start = trap.x_start;
    ansatz.x_end = trap.x_end();
    ansatz.label = "polynomial";
    const double x_a = trap.x_start;
    const double x_b = trap.x_end();
    const double gamma = ansatz.gamma;
    ansatz.transport = [=](double t) { return quintic_bridge(t, t_f, x_a, x_b); };
    if (trap.final_frequency() == trap.omega0) {
        ansatz.scaling = [](double) { return Jet{1.0, 0.0, 0.0}; };
    } else {
        ansatz.scaling = [=](double t) { return quintic_bridge(t, t_f, 1.0, gamma); };
    }
    return ansatz;
}

ControlProtocol inverse_engineer(const AuxiliaryAnsatz& ansatz, const TrapConfig& trap,
                                 double t_f, double frequency_floor) {
    require_positive_duration(t_f);
    const BoundaryReport report = verify_boundary_conditions(ansatz, t_f, 1e-8);
    if (!report.passed()) {
        std::ostringstream os;
        os << "inverse_engineer: ansatz violates boundary conditions:";
        for (const auto& f : report.failures()) {
            os << ' ' << f.name << "(t=" << f.time << ")=" << f.value << " expected " << f.expected;
        }
        throw std::invalid_argument(os.str());
    }

    const double w0sq = trap.omega0 * trap.omega0;
    auto omega2 = [scaling = ansatz.scaling, w0sq](double t) {
        const Jet rho = scaling(t);
        return (w0sq / (rho.value * rho.value * rho.value) - rho.second) / rho.value;
    };
    auto centre = [transport = ansatz.transport, omega2, frequency_floor](double t) {
        const Jet xc = transport(t);
        if (xc.second == 0.0) return xc.value;
        const double w2 = omega2(t);
        if (std::abs(w2) < frequency_floor) throw DivisionHazard(t, w2);
        return xc.second / w2 + xc.value;
    };

    constexpr int kScanPoints = 10000;
    for (int k = 0; k <= kScanPoints; ++k) {
        const double t = t_f * k / kScanPoints;
        const double x = centre(t);
        const double w2 = omega2(t);
        if (!std::isfinite(x) || !std::isfinite(w2)) {
            throw std::domain_error("inverse_engineer: non-finite control at t=" + std::to_string(t));
        }
    }

    return ControlProtocol(t_f, centre, omega2, "inverse-" + ansatz.label,
                           {{"omega0", trap.omega0},
                            {"omega_f", trap.final_frequency()},
                            {"x_start", ansatz.x_start},
                            {"x_end", ansatz.x_end},
                            {"gamma", ansatz.gamma},
                            {"tf", t_f}});
}

bool BoundaryReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::vector<BoundaryCheck> BoundaryReport::failures() const {
    std::vector<BoundaryCheck> out;
    std::copy_if(checks.begin(), checks.end(), std::back_inserter(out),
                 [](const auto& c) { return !c.passed; });
    return out;
}

BoundaryReport verify_boundary_conditions(const AuxiliaryAnsatz& ansatz, double t_f, double tol) {
    BoundaryReport report;
    auto add = [&](std::string name, double t, double value, double expected) {
        const double scale = std::max(1.0, std::abs(expected));
        const bool ok = std::isfinite(value) && std::abs(value - expected) <= tol * scale;
        report.checks.push_back({std::move(name), t, value, expected, ok});
    };
    const Jet x0 = ansatz.transport(0.0);
    const Jet x1 = ansatz.transport(t_f);
    const Jet r0 = ansatz.scaling(0.0);
    const Jet r1 = ansatz.scaling(t_f);
    add("X_c", 0.0, x0.value, ansatz.x_start);
    add("X_c", t_f, x1.value, ansatz.x_end);
    add("dX_c", 0.0, x0.first, 0.0);
    add("dX_c", t_f, x1.first, 0.0);
    add("ddX_c", 0.0, x0.second, 0.0);
    add("ddX_c", t_f, x1.second, 0.0);
    add("rho", 0.0, r0.value, 1.0);
    add("rho", t_f, r1.value, ansatz.gamma);
    add("drho", 0.0, r0.first, 0.0);
    add("drho", t_f, r1.first, 0.0);
    add("ddrho", 0.0, r0.second, 0.0);
    add("ddrho", t_f, r1.second, 0.0);
    return report;
}

}  // namespace magnon
