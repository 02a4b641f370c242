#pragma once

#include <optional>
#include <string>

namespace magnon {

struct ChainSpec;

/// Harmonic trap parameters for the mapped single-particle picture.
///
/// The packet width follows from the negative effective mass
/// |m| = hbar^2 / (2 J dx^2):  sigma = dx * sqrt(2 J / (hbar omega0)).
struct TrapConfig {
    double omega0 = 0.5;
    std::optional<double> omega_f;          ///< defaults to omega0
    double x_start = 50.0;                  ///< x_A
    double distance = 150.0;                ///< d = x_B - x_A
    std::optional<double> truncation_radius;  ///< defaults to 5 sigma
    std::optional<double> sigma_override;   ///< manual packet width

    double final_frequency() const { return omega_f.value_or(omega0); }
    double x_end() const { return x_start + distance; }

    /// Packet width at frequency `omega` for coupling `coupling`.
    static double width_for(double omega, double coupling);

    double sigma(const ChainSpec& chain) const;
    double sigma_final(const ChainSpec& chain) const;
    double truncation(const ChainSpec& chain) const;

    /// Throws std::invalid_argument on a violated invariant.
    void validate(const ChainSpec& chain) const;

    /// Empty when omega0 << 2J/hbar holds, otherwise a human readable warning.
    std::optional<std::string> mapping_warning(const ChainSpec& chain) const;
};

}  // namespace magnon
