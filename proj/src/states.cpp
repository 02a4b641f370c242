#include "magnon/states.hpp"

#include <cmath>
#include <stdexcept>

namespace magnon {

WaveState gaussian_packet(double centre, double sigma, const ChainSpec& spec) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_packet: sigma must be positive");
    if (!(centre >= 0.0 && centre <= spec.length())) {
        throw std::invalid_argument("gaussian_packet: centre " + std::to_string(centre) +
                                    " outside the chain");
    }
    WaveState psi;
    psi.amplitudes.resize(spec.n_sites);
    for (int i = 0; i < spec.n_sites; ++i) {
        const double offset = spec.site_position(i) - centre;
        psi.amplitudes[i] = std::exp(-offset * offset / (2.0 * sigma * sigma));
    }
    psi.amplitudes /= psi.amplitudes.norm();
    return psi;
}

WaveState gaussian_packet(double centre, const TrapConfig& trap, const ChainSpec& spec) {
    return gaussian_packet(centre, trap.sigma(spec), spec);
}

WaveState target_packet(const TrapConfig& trap, const ChainSpec& spec) {
    return gaussian_packet(trap.x_end(), trap.sigma_final(spec), spec);
}

std::optional<std::string> localization_warning(const WaveState& state) {
    int significant = 0;
    for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
        if (std::abs(state.amplitudes[i]) > 1e-6) ++significant;
    }
    if (significant >= 3) return std::nullopt;
    return "packet occupies only " + std::to_string(significant) +
           " site(s); the continuum mapping does not apply to single-site excitations";
}

WaveState basis_state(int n_sites, int site) {
    if (site < 0 || site >= n_sites) throw std::out_of_range("basis_state: site out of range");
    WaveState psi;
    psi.amplitudes = Eigen::VectorXcd::Zero(n_sites);
    psi.amplitudes[site] = 1.0;
    return psi;
}

double fidelity(const WaveState& a, const WaveState& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("fidelity: length mismatch " + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()));
    }
    return std::norm(a.amplitudes.dot(b.amplitudes));
}

std::vector<double> local_magnetization(const WaveState& psi) {
    std::vector<double> sz(psi.size());
    for (std::size_t i = 0; i < sz.size(); ++i) {
        sz[i] = 2.0 * std::norm(psi.amplitudes[static_cast<Eigen::Index>(i)]) - 1.0;
    }
    return sz;
}

double centroid(const WaveState& psi, const ChainSpec& spec) {
    double weighted = 0.0;
    double total = 0.0;
    for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i) {
        const double p = std::norm(psi.amplitudes[i]);
        weighted += spec.site_position(static_cast<int>(i)) * p;
        total += p;
    }
    return weighted / total;
}

}  // namespace magnon
