#pragma once

#include <vector>

#include "magnon/chain.hpp"
#include "magnon/control.hpp"
#include "magnon/propagator.hpp"

namespace magnon {

struct ClassicalState {
    double position = 0.0;
    double velocity = 0.0;
};

struct ClassicalSample {
    double time = 0.0;
    ClassicalState state;
};

/// RK4 integration of X'' = -omega^2(t) (X - X0(t)), the centroid equation
/// of motion in the trap. Includes t = 0 and t = t_f.
std::vector<ClassicalSample> classical_trajectory(const ControlProtocol& protocol,
                                                  ClassicalState initial, double t_f, double dt);

/// Overlap |<a|b>|^2 of two equal-width Gaussians offset by (delta_x, delta_p).
double continuum_fidelity(double delta_x, double delta_p, double sigma);

struct DeviationSample {
    double time = 0.0;
    double chain_centroid = 0.0;
    double classical_position = 0.0;
    double deviation = 0.0;
};

/// |<x>_chain - X_classical| at each recorded chain time; the classical
/// path is interpolated linearly.
std::vector<DeviationSample> ehrenfest_deviation(const Trajectory& chain_trajectory,
                                                 const ChainSpec& chain,
                                                 const std::vector<ClassicalSample>& classical);

}  // namespace magnon
