#include "magnon/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace magnon {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementation.
double unit_interval(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double TrapConfig::width_for(double omega, double coupling) {
    return kLatticeSpacing * std::sqrt(2.0 * coupling / (kHbar * omega));
}

double TrapConfig::sigma(const ChainSpec& chain) const {
    return sigma_override.value_or(width_for(omega0, chain.coupling));
}

double TrapConfig::sigma_final(const ChainSpec& chain) const {
    if (sigma_override) return *sigma_override;
    return width_for(final_frequency(), chain.coupling);
}

double TrapConfig::truncation(const ChainSpec& chain) const {
    return truncation_radius.value_or(5.0 * width_for(omega0, chain.coupling));
}

void TrapConfig::validate(const ChainSpec& chain) const {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
        throw std::invalid_argument("trap: omega0 must be positive");
    }
    if (!(final_frequency() > 0.0) || !std::isfinite(final_frequency())) {
        throw std::invalid_argument("trap: omega_f must be positive");
    }
    if (truncation_radius && !(*truncation_radius > 0.0)) {
        throw std::invalid_argument("trap: truncation_radius must be positive");
    }
    if (sigma_override && !(*sigma_override > 0.0)) {
        throw std::invalid_argument("trap: sigma override must be positive");
    }
    const double length = chain.length();
    auto inside = [length](double x) { return x > 0.0 && x < length; };
    if (!inside(x_start) || !inside(x_end())) {
        std::ostringstream os;
        os << "trap: x_start=" << x_start << " and x_start+distance=" << x_end()
           << " must lie strictly inside [0, " << length << "]";
        throw std::invalid_argument(os.str());
    }
}

std::optional<std::string> TrapConfig::mapping_warning(const ChainSpec& chain) const {
    const double limit = 2.0 * chain.coupling / kHbar;
    if (omega0 < limit && final_frequency() < limit) return std::nullopt;
    std::ostringstream os;
    os << "trap frequency " << std::max(omega0, final_frequency()) << " >= 2J/hbar = " << limit
       << ": packet narrower than a lattice spacing, continuum mapping is unreliable";
    return os.str();
}

ChainSpec ChainSpec::uniform(int n_sites, double coupling) {
    ChainSpec spec;
    spec.n_sites = n_sites;
    spec.coupling = coupling;
    if (n_sites >= 2) spec.bond_couplings.assign(static_cast<std::size_t>(n_sites - 1), coupling);
    return spec;
}

void ChainSpec::validate() const {
    if (n_sites < 3) {
        throw std::invalid_argument("chain: n_sites must be at least 3, got " +
                                    std::to_string(n_sites));
    }
    if (bond_couplings.size() != static_cast<std::size_t>(n_sites - 1)) {
        throw std::invalid_argument("chain: expected " + std::to_string(n_sites - 1) +
                                    " bond couplings, got " +
                                    std::to_string(bond_couplings.size()));
    }
    for (double j : bond_couplings) {
        if (!std::isfinite(j)) throw std::invalid_argument("chain: non-finite bond coupling");
    }
}

TridiagonalMatrix build_static_hamiltonian(const ChainSpec& spec) {
    spec.validate();
    const auto n = static_cast<std::size_t>(spec.n_sites);
    TridiagonalMatrix h;
    h.diagonal.assign(n, 0.0);
    h.off_diagonal = spec.bond_couplings;

    const bool uniform_diagonal = spec.disorder_mode == DisorderMode::HoppingOnly;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double bond = uniform_diagonal ? spec.coupling : spec.bond_couplings[i];
        h.diagonal[i] -= bond;
        h.diagonal[i + 1] -= bond;
    }
    return h;
}

void add_field_profile(double squared_frequency, double centre, double truncation_radius,
                       const ChainSpec& spec, std::span<double> out) {
    if (out.size() != static_cast<std::size_t>(spec.n_sites)) {
        throw std::invalid_argument("field_profile: output size mismatch");
    }
    const double prefactor = -kHbar * kHbar * squared_frequency / (4.0 * spec.coupling);
    const double lo = std::ceil((centre - truncation_radius) / kLatticeSpacing);
    const double hi = std::floor((centre + truncation_radius) / kLatticeSpacing);
    const int first = static_cast<int>(std::clamp(lo, 0.0, static_cast<double>(spec.n_sites)));
    const int last = static_cast<int>(std::clamp(hi, -1.0, static_cast<double>(spec.n_sites - 1)));
    for (int i = first; i <= last; ++i) {
        const double offset = spec.site_position(i) - centre;
        if (std::abs(offset) > truncation_radius) continue;
        const double u = offset / kLatticeSpacing;
        out[static_cast<std::size_t>(i)] += prefactor * u * u;
    }
}

void field_profile(double squared_frequency, double centre, double truncation_radius,
                   const ChainSpec& spec, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    add_field_profile(squared_frequency, centre, truncation_radius, spec, out);
}

std::vector<double> field_profile(double t, const ControlProtocol& protocol,
                                  const TrapConfig& trap, const ChainSpec& spec) {
    if (!protocol.contains(t)) {
        throw std::out_of_range("field_profile: t=" + std::to_string(t) + " outside [0, " +
                                std::to_string(protocol.duration()) + "]");
    }
    std::vector<double> out(static_cast<std::size_t>(spec.n_sites));
    field_profile(protocol.squared_frequency(t), protocol.position(t), trap.truncation(spec),
                  spec, out);
    return out;
}

std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t realization_index) {
    return splitmix64(splitmix64(master_seed) ^ realization_index);
}

std::vector<double> sample_disordered_couplings(const ChainSpec& spec,
                                                const DisorderSpec& disorder) {
    if (!(disorder.amplitude >= 0.0)) {
        throw std::invalid_argument("disorder: amplitude must be non-negative");
    }
    if (spec.n_sites < 2) throw std::invalid_argument("disorder: chain too short");
    std::mt19937_64 rng(realization_seed(disorder.master_seed, disorder.realization_index));
    std::vector<double> couplings(static_cast<std::size_t>(spec.n_sites - 1));
    for (double& j : couplings) {
        const double eps = disorder.amplitude * (2.0 * unit_interval(rng) - 1.0);
        j = spec.coupling * (1.0 + eps);
    }
    return couplings;
}

ChainSpec with_disorder(const ChainSpec& spec, const DisorderSpec& disorder) {
    ChainSpec out = spec;
    out.bond_couplings = sample_disordered_couplings(spec, disorder);
    return out;
}

}  // namespace magnon
