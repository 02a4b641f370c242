#include "magnon/propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace magnon {

namespace {

constexpr double kBesselCutoff = 1e-17;
// Radius ladder: r_k = 2^(k / kLadderDensity) * dt-scaled units.
constexpr double kLadderDensity = 64.0;

void check_unit_norm(const WaveState& psi, const char* what) {
    const double n = psi.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > kNormTolerance) {
        std::ostringstream os;
        os << what << ": initial state must have unit norm (got " << n << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

long PropagationPlan::step_count() const {
    if (t_final <= 0.0) return 0;
    return std::max(1L, static_cast<long>(std::ceil(t_final / step - 1e-9)));
}

double PropagationPlan::effective_step() const {
    const long n = step_count();
    return n == 0 ? 0.0 : t_final / static_cast<double>(n);
}

void PropagationPlan::validate() const {
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
        throw std::invalid_argument("plan: t_final must be non-negative");
    }
    if (!(step > 0.0)) throw std::invalid_argument("plan: step must be positive");
    if (t_final > 0.0 && step > t_final) {
        throw std::invalid_argument("plan: step exceeds t_final");
    }
    if (record_stride < 1) throw std::invalid_argument("plan: record_stride must be >= 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("plan: tolerance must be positive");
}

SubspaceHamiltonian::SubspaceHamiltonian(const ChainSpec& chain, const TrapConfig& trap,
                                         const ControlProtocol& protocol)
    : chain_(chain),
      static_(build_static_hamiltonian(chain)),
      protocol_(protocol),
      truncation_(trap.truncation(chain)) {
    trap.validate(chain);
}

void SubspaceHamiltonian::diagonal_at(double t, std::span<double> diagonal) const {
    std::copy(static_.diagonal.begin(), static_.diagonal.end(), diagonal.begin());
    add_field_profile(protocol_.squared_frequency(t), protocol_.position(t), truncation_, chain_,
                      diagonal);
}

void SubspaceHamiltonian::field_moments(double t0, double t1, std::span<double> mean,
                                        std::span<double> slope) const {
    std::fill(mean.begin(), mean.end(), 0.0);
    std::fill(slope.begin(), slope.end(), 0.0);
    const double h = t1 - t0;
    if (!(h > 0.0)) {
        add_field_profile(protocol_.squared_frequency(t0), protocol_.position(t0), truncation_,
                          chain_, mean);
        return;
    }

    // Three-point Gauss-Legendre on [a, b] of the untruncated field at x,
    // plain and weighted by tau - 1/2.
    constexpr double kNode = 0.7745966692414834;  // sqrt(3/5)
    const double prefactor = -kHbar * kHbar / (4.0 * chain_.coupling);
    auto integrate = [&](double x, double a, double b, double& m0, double& m1) {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (auto [offset, weight] : {std::pair{-kNode, 5.0 / 9.0}, {0.0, 8.0 / 9.0}, {kNode, 5.0 / 9.0}}) {
            const double s = mid + offset * half;
            const double u = (x - protocol_.position(s)) / kLatticeSpacing;
            const double value = prefactor * half * weight * protocol_.squared_frequency(s) * u * u;
            m0 += value;
            m1 += ((s - t0) / h - 0.5) * value;
        }
    };

    constexpr int kSamples = 5;
    std::array<double, kSamples> times{};
    std::array<double, kSamples> centres{};
    double lowest = std::numeric_limits<double>::infinity();
    double highest = -lowest;
    for (int k = 0; k < kSamples; ++k) {
        times[k] = k + 1 == kSamples ? t1 : t0 + h * k / (kSamples - 1);
        centres[k] = protocol_.position(times[k]);
        lowest = std::min(lowest, centres[k]);
        highest = std::max(highest, centres[k]);
    }

    const int first = std::max(0, static_cast<int>(std::floor((lowest - truncation_) / kLatticeSpacing)) - 1);
    const int last = std::min(chain_.n_sites - 1,
                              static_cast<int>(std::ceil((highest + truncation_) / kLatticeSpacing)) + 1);
    for (int i = first; i <= last; ++i) {
        const double x = chain_.site_position(i);
        auto inside = [&](double s) { return std::abs(x - protocol_.position(s)) <= truncation_; };
        std::array<bool, kSamples> in{};
        bool any = false;
        bool all = true;
        for (int k = 0; k < kSamples; ++k) {
            in[k] = std::abs(x - centres[k]) <= truncation_;
            any = any || in[k];
            all = all && in[k];
        }
        if (!any) continue;
        double m0 = 0.0;
        double m1 = 0.0;
        if (all) {
            integrate(x, t0, t1, m0, m1);
        } else {
            // Split each sample interval at the edge crossing found by bisection.
            for (int k = 0; k + 1 < kSamples; ++k) {
                const double a = times[k];
                const double b = times[k + 1];
                if (in[k] == in[k + 1]) {
                    if (in[k]) integrate(x, a, b, m0, m1);
                    continue;
                }
                double lo = a;
                double hi = b;
                for (int it = 0; it < 60 && hi - lo > 1e-15 * std::max(1.0, b); ++it) {
                    const double m = 0.5 * (lo + hi);
                    (inside(m) == in[k] ? lo : hi) = m;
                }
                const double cross = 0.5 * (lo + hi);
                if (in[k]) {
                    integrate(x, a, cross, m0, m1);
                } else {
                    integrate(x, cross, b, m0, m1);
                }
            }
        }
        mean[static_cast<std::size_t>(i)] = m0 / h;
        slope[static_cast<std::size_t>(i)] = m1 / h;
    }
}

const std::vector<double>& ChebyshevStepper::coefficients_for(int ladder_index,
                                                              double scaled_radius) {
    auto it = cache_.find(ladder_index);
    if (it != cache_.end()) return it->second;
    std::vector<double> bessel;
    const int minimum = static_cast<int>(std::ceil(scaled_radius)) + 2;
    for (int k = 0;; ++k) {
        const double jk = std::cyl_bessel_j(static_cast<double>(k), scaled_radius);
        bessel.push_back(jk);
        if (k >= minimum && std::abs(jk) < kBesselCutoff) break;
        if (k > 10000) throw PropagationError("chebyshev: series failed to converge");
    }
    return cache_.emplace(ladder_index, std::move(bessel)).first->second;
}

int ChebyshevStepper::apply(std::span<const double> diagonal,
                            std::span<const double> off_diagonal, double dt,
                            Eigen::VectorXcd& psi) {
    const std::size_t n = diagonal.size();
    double lo = diagonal[0];
    double hi = diagonal[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? std::abs(off_diagonal[i - 1]) : 0.0;
        const double right = i + 1 < n ? std::abs(off_diagonal[i]) : 0.0;
        lo = std::min(lo, diagonal[i] - left - right);
        hi = std::max(hi, diagonal[i] + left + right);
    }
    const double centre = 0.5 * (hi + lo);
    const double exact_radius = 0.5 * (hi - lo) * dt / kHbar;
    const std::complex<double> phase = std::polar(1.0, -centre * dt / kHbar);
    if (exact_radius < 1e-300) {
        psi *= phase;
        return 1;
    }

    const int ladder = static_cast<int>(std::ceil(std::log2(exact_radius) * kLadderDensity));
    const double scaled = std::exp2(ladder / kLadderDensity);
    const std::vector<double>& bessel = coefficients_for(ladder, scaled);
    // Normalized operator (H - centre) / radius with radius in energy units.
    const double inv_radius = dt / (kHbar * scaled);

    // Normalized operator Hn = (H - centre) / radius, stored scaled.
    scaled_diagonal_.resize(n);
    scaled_off_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) scaled_diagonal_[i] = (diagonal[i] - centre) * inv_radius;
    for (std::size_t i = 0; i + 1 < n; ++i) scaled_off_[i + 1] = off_diagonal[i] * inv_radius;
    const double* dd = scaled_diagonal_.data();
    // e[i] couples sites i-1 and i; e[0] = e[n] = 0 pad the ends.
    const double* e = scaled_off_.data();

    // Split real/imaginary storage: T_{k-1}, T_k and the running sum.
    work_.assign(6 * n, 0.0);
    double* older_re = work_.data();
    double* older_im = older_re + n;
    double* newer_re = older_im + n;
    double* newer_im = newer_re + n;
    double* acc_re = newer_im + n;
    double* acc_im = acc_re + n;

    for (std::size_t i = 0; i < n; ++i) {
        const auto z = psi[static_cast<Eigen::Index>(i)];
        older_re[i] = z.real();
        older_im[i] = z.imag();
    }

    // y = 2 Hn x - y, i.e. T_{k+1} = 2 Hn T_k - T_{k-1} written over T_{k-1}.
    // With `twice` = 1 and y = 0 on entry this computes T_1 = Hn T_0.
    auto recur = [&](const double* x, double* y, double twice, double keep) {
        y[0] = twice * (dd[0] * x[0] + e[1] * x[1]) - keep * y[0];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            y[i] = twice * (dd[i] * x[i] + e[i] * x[i - 1] + e[i + 1] * x[i + 1]) - keep * y[i];
        }
        y[n - 1] = twice * (dd[n - 1] * x[n - 1] + e[n - 1] * x[n - 2]) - keep * y[n - 1];
    };

    // sum_k c_k (-i)^k J_k(r) T_k(Hn) psi with c_0 = 1, c_k = 2. The
    // coefficient (-i)^k c_k J_k is real for even k and imaginary for odd k.
    recur(older_re, newer_re, 1.0, 0.0);
    recur(older_im, newer_im, 1.0, 0.0);
    const double b0 = bessel[0];
    const double b1 = 2.0 * bessel[1];
    for (std::size_t i = 0; i < n; ++i) {
        acc_re[i] = b0 * older_re[i] + b1 * newer_im[i];
        acc_im[i] = b0 * older_im[i] - b1 * newer_re[i];
    }

    const int terms = static_cast<int>(bessel.size());
    for (int k = 2; k < terms; ++k) {
        recur(newer_re, older_re, 2.0, 1.0);
        recur(newer_im, older_im, 2.0, 1.0);
        // (-i)^k = 1, -i, -1, i for k mod 4 = 0, 1, 2, 3.
        const double c = ((k % 4 < 2) ? 2.0 : -2.0) * bessel[static_cast<std::size_t>(k)];
        if (k % 2 == 0) {
            for (std::size_t i = 0; i < n; ++i) {
                acc_re[i] += c * older_re[i];
                acc_im[i] += c * older_im[i];
            }
        } else {
            // c (-i) (a + ib) = c b - i c a
            for (std::size_t i = 0; i < n; ++i) {
                acc_re[i] += c * older_im[i];
                acc_im[i] -= c * older_re[i];
            }
        }
        std::swap(older_re, newer_re);
        std::swap(older_im, newer_im);
    }

    for (std::size_t i = 0; i < n; ++i) {
        psi[static_cast<Eigen::Index>(i)] = {phase.real() * acc_re[i] - phase.imag() * acc_im[i],
                                             phase.real() * acc_im[i] + phase.imag() * acc_re[i]};
    }
    return terms;
}

WaveState propagate(const WaveState& psi0, const SubspaceHamiltonian& hamiltonian,
                    const PropagationPlan& plan, const StateObserver& observer) {
    plan.validate();
    check_unit_norm(psi0, "propagate");
    if (psi0.size() != hamiltonian.size()) {
        throw std::invalid_argument("propagate: state length does not match chain");
    }
    if (plan.t_final > hamiltonian.protocol().duration() * (1.0 + 1e-12)) {
        throw std::invalid_argument("propagate: t_final exceeds protocol duration");
    }

    WaveState psi = psi0;
    psi.time = 0.0;
    if (observer) observer(psi);

    const long steps = plan.step_count();
    const double h = plan.effective_step();
    const std::size_t n = hamiltonian.size();
    const auto& h0 = hamiltonian.static_part();
    std::vector<double> half_off(h0.off_diagonal.size());
    for (std::size_t i = 0; i < half_off.size(); ++i) half_off[i] = 0.5 * h0.off_diagonal[i];
    std::vector<double> mean(n);
    std::vector<double> slope(n);
    std::vector<double> early(n);
    std::vector<double> late(n);
    ChebyshevStepper stepper;

    for (long k = 0; k < steps; ++k) {
        const double t = h * static_cast<double>(k);
        const double t_next = (k + 1 == steps) ? plan.t_final : t + h;
        const double dt = t_next - t;
        hamiltonian.field_moments(t, t_next, mean, slope);
        for (std::size_t i = 0; i < n; ++i) {
            const double base = 0.5 * (h0.diagonal[i] + mean[i]);
            early[i] = base - 2.0 * slope[i];
            late[i] = base + 2.0 * slope[i];
        }
        stepper.apply(early, half_off, dt, psi.amplitudes);
        stepper.apply(late, half_off, dt, psi.amplitudes);
        psi.time = t_next;

        const double norm = psi.norm();
        if (!std::isfinite(norm)) {
            throw PropagationError("propagate: non-finite amplitudes at t=" +
                                   std::to_string(psi.time));
        }
        if (std::abs(norm - 1.0) > kNormAbortThreshold) {
            std::ostringstream os;
            os << "propagate: norm drifted to " << norm << " at t=" << psi.time
               << " with dt=" << h << "; reduce the step size";
            throw PropagationError(os.str());
        }
        if (observer && ((k + 1) % plan.record_stride == 0 || k + 1 == steps)) observer(psi);
    }
    return psi;
}

Trajectory evolve(const WaveState& psi0, const ChainSpec& chain, const TrapConfig& trap,
                  const ControlProtocol& protocol, const PropagationPlan& plan) {
    const SubspaceHamiltonian hamiltonian(chain, trap, protocol);
    Trajectory out;
    propagate(psi0, hamiltonian, plan, [&out](const WaveState& s) { out.push_back(s); });
    return out;
}

FidelityResult evolve_fidelity(const WaveState& psi0, const WaveState& target,
                               const ChainSpec& chain, const TrapConfig& trap,
                               const ControlProtocol& protocol, const PropagationPlan& plan) {
    if (target.size() != psi0.size()) {
        throw std::invalid_argument("evolve_fidelity: target length mismatch");
    }
    const SubspaceHamiltonian hamiltonian(chain, trap, protocol);
    FidelityResult result;
    result.final_state = propagate(psi0, hamiltonian, plan, [&](const WaveState& s) {
        result.series.push_back({s.time, fidelity(target, s), s.norm()});
    });
    result.final_fidelity = fidelity(target, result.final_state);

    if (plan.verify_step_halving && plan.t_final > 0.0) {
        PropagationPlan half = plan;
        half.step = plan.effective_step() / 2.0;
        half.verify_step_halving = false;
        const WaveState refined = propagate(psi0, hamiltonian, half);
        const double agreement = fidelity(result.final_state, refined);
        result.halving_agreement = agreement;
        if (agreement < 1.0 - plan.tolerance) {
            std::ostringstream os;
            os << "evolve_fidelity: step-halving check failed, 1 - F(dt, dt/2) = "
               << 1.0 - agreement << " exceeds tolerance " << plan.tolerance << " at dt="
               << plan.effective_step();
            throw PropagationError(os.str());
        }
    }
    return result;
}

}  // namespace magnon
