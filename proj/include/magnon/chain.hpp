#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "magnon/control.hpp"
#include "magnon/trap.hpp"
#include "magnon/units.hpp"

namespace magnon {

/// Real symmetric tridiagonal matrix stored by its diagonals.
struct TridiagonalMatrix {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;  ///< size() - 1 entries

    std::size_t size() const { return diagonal.size(); }
};

/// Which Hamiltonian terms pick up bond disorder.
enum class DisorderMode {
    Full,         ///< hopping and the exchange-induced diagonal shifts
    HoppingOnly,  ///< hopping only; diagonal keeps the uniform-chain values
};

struct ChainSpec {
    int n_sites = 251;
    double coupling = 1.0;               ///< J
    std::vector<double> bond_couplings;  ///< J_n, n_sites - 1 entries
    DisorderMode disorder_mode = DisorderMode::Full;

    static ChainSpec uniform(int n_sites, double coupling = 1.0);

    /// Position of zero-based site `index`.
    double site_position(int index) const { return index * kLatticeSpacing; }
    double length() const { return (n_sites - 1) * kLatticeSpacing; }

    void validate() const;
};

struct DisorderSpec {
    double amplitude = 0.0;  ///< Delta
    std::uint64_t master_seed = 0;
    std::uint64_t realization_index = 0;
};

/// Single-excitation hopping part. Diagonal entry n is -(J_{n-1} + J_n) with
/// J_0 = J_N = 0, off-diagonal entry n is J_n.
TridiagonalMatrix build_static_hamiltonian(const ChainSpec& spec);

/// Mapped harmonic field B_n = -(hbar^2 w^2 / 4J) ((x_n - X0) / dx)^2 inside
/// the truncation radius, zero outside.
void field_profile(double squared_frequency, double centre, double truncation_radius,
                   const ChainSpec& spec, std::span<double> out);

/// Adds the mapped field to `out` (no zero fill); used to assemble H_s(t).
void add_field_profile(double squared_frequency, double centre, double truncation_radius,
                       const ChainSpec& spec, std::span<double> out);

/// B_n(t) for protocol time t. Throws std::out_of_range outside [0, t_f].
std::vector<double> field_profile(double t, const ControlProtocol& protocol,
                                  const TrapConfig& trap, const ChainSpec& spec);

/// J_n = J (1 + eps_n), eps_n ~ U[-Delta, Delta]. Pure in (master_seed, realization_index).
std::vector<double> sample_disordered_couplings(const ChainSpec& spec, const DisorderSpec& disorder);

/// Copy of `spec` with bond couplings drawn from `disorder`.
ChainSpec with_disorder(const ChainSpec& spec, const DisorderSpec& disorder);

/// Seed of the per-realization stream (SplitMix64 mix of both inputs).
std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t realization_index);

}  // namespace magnon
