#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "magnon/chain.hpp"
#include "magnon/trap.hpp"

namespace magnon {

/// Single-excitation state: amplitude per site in the |phi_n> basis.
struct WaveState {
    Eigen::VectorXcd amplitudes;
    double time = 0.0;

    std::size_t size() const { return static_cast<std::size_t>(amplitudes.size()); }
    double norm() const { return amplitudes.norm(); }
};

inline constexpr double kNormTolerance = 1e-9;

/// Normalized Gaussian b_n = exp(-(x_n - u)^2 / 2 sigma^2) over every site.
WaveState gaussian_packet(double centre, double sigma, const ChainSpec& spec);

/// Gaussian with the trap's ground-state width (sigma from omega0).
WaveState gaussian_packet(double centre, const TrapConfig& trap, const ChainSpec& spec);

/// Target packet at x_B with width from omega_f.
WaveState target_packet(const TrapConfig& trap, const ChainSpec& spec);

/// Warns when fewer than three sites carry amplitude above 1e-6.
std::optional<std::string> localization_warning(const WaveState& state);

WaveState basis_state(int n_sites, int site);

/// |<a|b>|^2. Throws std::invalid_argument on a length mismatch.
double fidelity(const WaveState& a, const WaveState& b);

/// <sigma_z^n> = 2 |psi_n|^2 - 1.
std::vector<double> local_magnetization(const WaveState& psi);

/// Expected position sum_n x_n |psi_n|^2.
double centroid(const WaveState& psi, const ChainSpec& spec);

}  // namespace magnon
