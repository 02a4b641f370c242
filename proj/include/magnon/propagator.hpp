#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "magnon/chain.hpp"
#include "magnon/control.hpp"
#include "magnon/states.hpp"

namespace magnon {

inline constexpr double kDefaultStep = 0.02;
inline constexpr double kDefaultTolerance = 1e-8;
inline constexpr double kNormAbortThreshold = 1e-6;

struct PropagationPlan {
    double t_final = 0.0;
    double step = kDefaultStep;
    int record_stride = 1;
    double tolerance = kDefaultTolerance;
    bool verify_step_halving = false;

    /// Number of steps; the step is shrunk so that t_final is hit exactly.
    long step_count() const;
    double effective_step() const;
    void validate() const;
};

class PropagationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// H_s(t) = H_0 + H_1(t) for one chain, trap and protocol.
class SubspaceHamiltonian {
public:
    SubspaceHamiltonian(const ChainSpec& chain, const TrapConfig& trap,
                        const ControlProtocol& protocol);

    const TridiagonalMatrix& static_part() const { return static_; }
    const ControlProtocol& protocol() const { return protocol_; }
    std::size_t size() const { return static_.size(); }

    /// Fills `diagonal` with the full diagonal of H_s(t).
    void diagonal_at(double t, std::span<double> diagonal) const;

    /// Field moments over [t0, t1] with tau = (t - t0) / (t1 - t0):
    ///   mean  = (1/h) int B_n dt,   slope = (1/h) int (tau - 1/2) B_n dt.
    /// Sites crossing the truncation edge inside the interval are integrated
    /// piecewise, so the hard cutoff does not degrade the step order.
    void field_moments(double t0, double t1, std::span<double> mean, std::span<double> slope) const;

private:
    ChainSpec chain_;
    TridiagonalMatrix static_;
    ControlProtocol protocol_;
    double truncation_;
};

/// exp(-i dt H / hbar) applied to a vector, H tridiagonal, by a Chebyshev
/// expansion over Gershgorin spectral bounds. The series is cut once the
/// Bessel coefficients drop below 1e-17, so each step is unitary to round-off.
/// The spectral radius is rounded up onto a geometric ladder so coefficient
/// sets can be reused across steps. Not thread safe; one per evolution.
class ChebyshevStepper {
public:
    ChebyshevStepper() = default;

    /// Overwrites `psi` with exp(-i dt H) psi; returns the number of terms.
    int apply(std::span<const double> diagonal, std::span<const double> off_diagonal,
              double dt, Eigen::VectorXcd& psi);

private:
    const std::vector<double>& coefficients_for(int ladder_index, double scaled_radius);

    std::vector<double> work_;
    std::vector<double> scaled_diagonal_;
    std::vector<double> scaled_off_;
    std::map<int, std::vector<double>> cache_;
};

using Trajectory = std::vector<WaveState>;
using StateObserver = std::function<void(const WaveState&)>;

/// Fourth-order commutator-free Magnus scheme. With H0 the static part and
/// M0, M1 the field moments of the step, each step applies
///   exp(-i dt (H0/2 + M0/2 + 2 M1)) exp(-i dt (H0/2 + M0/2 - 2 M1)),
/// which for smooth fields equals the two-node Gauss form and reduces to the
/// exponential midpoint rule at second order. `observer` sees the initial
/// state and every `record_stride`-th state plus the final one.
WaveState propagate(const WaveState& psi0, const SubspaceHamiltonian& hamiltonian,
                    const PropagationPlan& plan, const StateObserver& observer = {});

Trajectory evolve(const WaveState& psi0, const ChainSpec& chain, const TrapConfig& trap,
                  const ControlProtocol& protocol, const PropagationPlan& plan);

struct FidelitySample {
    double time = 0.0;
    double fidelity = 0.0;
    double norm = 0.0;
};

struct FidelityResult {
    std::vector<FidelitySample> series;
    double final_fidelity = 0.0;
    WaveState final_state;
    /// Fidelity between full-step and half-step final states, when verified.
    std::optional<double> halving_agreement;
};

FidelityResult evolve_fidelity(const WaveState& psi0, const WaveState& target,
                               const ChainSpec& chain, const TrapConfig& trap,
                               const ControlProtocol& protocol, const PropagationPlan& plan);

}  // namespace magnon
