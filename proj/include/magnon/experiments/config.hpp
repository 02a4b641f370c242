#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "magnon/chain.hpp"
#include "magnon/propagator.hpp"
#include "magnon/trap.hpp"

namespace magnon::experiments {

/// Evenly spaced grid from `first` to `last` inclusive.
std::vector<double> arange(double first, double last, double step);

struct ChainSection {
    int n_sites = 251;
    double coupling = 1.0;
    DisorderMode disorder_mode = DisorderMode::Full;
    bool operator==(const ChainSection&) const = default;
};

struct ProtocolSection {
    std::string name = "sta";  ///< "sta", "linear" or "inverse"
    double tf = 200.0;
    bool operator==(const ProtocolSection&) const = default;
};

struct PlanSection {
    double dt = kDefaultStep;
    int record_stride = 50;
    double tolerance = kDefaultTolerance;
    bool verify_step_halving = false;
    bool operator==(const PlanSection&) const = default;
};

/// Fidelity against total operation time.
struct SweepSection {
    std::vector<std::string> protocols{"linear", "sta"};
    std::vector<double> tf_grid = arange(50.0, 700.0, 10.0);
    std::vector<double> omega0_list{0.25, 0.5, 0.85, 1.0};
    bool operator==(const SweepSection&) const = default;
};

/// Fidelity over (t_f, d) with transition extraction.
struct MapSection {
    std::vector<double> tf_grid = arange(20.0, 400.0, 10.0);
    std::vector<double> d_grid = arange(20.0, 160.0, 10.0);
    std::vector<double> omega0_list{0.5, 0.25};
    double threshold = 0.5;
    double refine_step = 1.0;  ///< spacing of extra points inside bracketing intervals; 0 disables
    bool operator==(const MapSection&) const = default;
};

struct DisorderSection {
    std::vector<double> deltas{0.0, 0.01, 0.02, 0.05, 0.1, 0.15, 0.2};
    int realizations = 1000;
    std::uint64_t master_seed = 20200611;
    std::string protocol = "sta";
    double tf = 400.0;
    bool operator==(const DisorderSection&) const = default;
};

struct OutputSection {
    std::string directory = "out";
    bool svg = true;
    bool operator==(const OutputSection&) const = default;
};

/// Complete description of one experiment. Defaults reproduce the
/// N = 251, omega0 = 0.5, x_A = 50, d = 150 geometry.
struct RunConfig {
    ChainSection chain;
    TrapConfig trap;
    ProtocolSection protocol;
    PlanSection plan;
    SweepSection sweep;
    MapSection map;
    DisorderSection disorder;
    OutputSection output;
    int workers = 1;

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;

    ChainSpec chain_spec() const;
    PropagationPlan propagation_plan(double t_final) const;

    bool operator==(const RunConfig& other) const;
};

/// Unknown keys anywhere in the document are rejected.
RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const RunConfig& config);

RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& config, const std::filesystem::path& path);
std::string dump_config(const RunConfig& config);

/// Builds the named protocol ("linear", "sta", "inverse") for `trap`.
ControlProtocol make_protocol(const std::string& name, const TrapConfig& trap, double t_f);

}  // namespace magnon::experiments
