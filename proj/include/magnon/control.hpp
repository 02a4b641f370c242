#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "magnon/trap.hpp"

namespace magnon {

/// A time-dependent control pair: trap centre X0(t) and squared trap
/// frequency omega^2(t) on [0, duration]. Evaluation is pure and thread safe.
class ControlProtocol {
public:
    using Function = std::function<double(double)>;

    ControlProtocol(double duration, Function trajectory, Function squared_frequency,
                    std::string label, std::map<std::string, double> parameters = {});

    double duration() const { return duration_; }
    const std::string& label() const { return label_; }
    const std::map<std::string, double>& parameters() const { return parameters_; }

    /// Trap centre X0(t). Throws std::out_of_range outside [0, duration].
    double position(double t) const;
    /// omega^2(t); may be negative for expulsive phases.
    double squared_frequency(double t) const;

    bool contains(double t) const;

private:
    double clamp_checked(double t) const;

    double duration_;
    Function trajectory_;
    Function squared_frequency_;
    std::string label_;
    std::map<std::string, double> parameters_;
};

/// Value and first two time derivatives of a scalar function.
struct Jet {
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
};

/// Auxiliary functions (X_c, rho) of the invariant-based design.
struct AuxiliaryAnsatz {
    std::function<Jet(double)> transport;  ///< X_c(t)
    std::function<Jet(double)> scaling;    ///< rho(t)
    double gamma = 1.0;                    ///< sqrt(omega0 / omega_f)
    double x_start = 0.0;
    double x_end = 0.0;
    std::string label = "custom";
};

/// Thrown when omega^2 is too close to zero where X_c accelerates.
class DivisionHazard : public std::domain_error {
public:
    DivisionHazard(double time, double squared_frequency);
    double time() const { return time_; }
    double squared_frequency() const { return squared_frequency_; }

private:
    double time_;
    double squared_frequency_;
};

inline constexpr double kDefaultFrequencyFloor = 1e-6;

/// Constant frequency, trap centre moving at constant speed from x_A to x_B.
ControlProtocol linear_ramp(const TrapConfig& trap, double t_f);

/// Closed-form shortcut trajectory for the quintic X_c with rho = 1.
ControlProtocol sta_polynomial(const TrapConfig& trap, double t_f);

/// Trap held at `centre` with frequency omega0 for `duration`.
ControlProtocol stationary_trap(const TrapConfig& trap, double duration, double centre);

/// Same controls played backwards in time.
ControlProtocol time_reversed(const ControlProtocol& protocol);

/// Quintic smoothstep 6s^5 - 15s^4 + 10s^3 and its s-derivatives.
Jet quintic_smoothstep(double s);

/// Minimal polynomial ansatz: quintic X_c and (for omega_f != omega0) a
/// quintic rho bridge from 1 to gamma. rho is identically 1 otherwise.
AuxiliaryAnsatz polynomial_xc(const TrapConfig& trap, double t_f);

/// Inverts the auxiliary equations:
///   omega^2 = (omega0^2 / rho^3 - rho'') / rho,   X0 = X_c'' / omega^2 + X_c.
/// Scans [0, t_f] and throws DivisionHazard where |omega^2| < floor while
/// X_c'' != 0; throws std::invalid_argument when boundary conditions fail.
ControlProtocol inverse_engineer(const AuxiliaryAnsatz& ansatz, const TrapConfig& trap,
                                 double t_f, double frequency_floor = kDefaultFrequencyFloor);

struct BoundaryCheck {
    std::string name;
    double time = 0.0;
    double value = 0.0;
    double expected = 0.0;
    bool passed = false;
};

struct BoundaryReport {
    std::vector<BoundaryCheck> checks;
    bool passed() const;
    std::vector<BoundaryCheck> failures() const;
};

/// Evaluates X_c, X_c', X_c'', rho, rho', rho'' at t = 0 and t = t_f.
/// Value conditions are checked relative to max(1, |expected|).
BoundaryReport verify_boundary_conditions(const AuxiliaryAnsatz& ansatz, double t_f,
                                          double tol);

}  // namespace magnon
