#include "magnon/experiments/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace magnon::experiments {

using nlohmann::json;

namespace {

void reject_unknown(const json& object, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    if (!object.is_object()) throw std::invalid_argument("config: '" + where + "' must be an object");
    const std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& item : object.items()) {
        if (!known.count(item.key())) {
            throw std::invalid_argument("config: unknown key '" + where + "." + item.key() + "'");
        }
    }
}

template <typename T>
void read(const json& object, const char* key, T& target) {
    if (auto it = object.find(key); it != object.end()) target = it->get<T>();
}

void read_optional(const json& object, const char* key, std::optional<double>& target) {
    if (auto it = object.find(key); it != object.end()) {
        target = it->is_null() ? std::nullopt : std::optional<double>(it->get<double>());
    }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string mode_name(DisorderMode mode) {
    return mode == DisorderMode::Full ? "full" : "hopping_only";
}

DisorderMode parse_mode(const std::string& name) {
    if (name == "full") return DisorderMode::Full;
    if (name == "hopping_only") return DisorderMode::HoppingOnly;
    throw std::invalid_argument("config: disorder_mode must be 'full' or 'hopping_only', got '" +
                                name + "'");
}

void require_grid(const std::vector<double>& grid, const std::string& name, bool positive) {
    if (grid.empty()) throw std::invalid_argument("config: grid '" + name + "' is empty");
    for (double v : grid) {
        if (!std::isfinite(v) || (positive && !(v > 0.0)) || (!positive && v < 0.0)) {
            throw std::invalid_argument("config: grid '" + name + "' has invalid entry " +
                                        std::to_string(v));
        }
    }
}

void require_protocol_name(const std::string& name) {
    if (name != "sta" && name != "linear" && name != "inverse") {
        throw std::invalid_argument("config: unknown protocol '" + name + "'");
    }
}

}  // namespace

std::vector<double> arange(double first, double last, double step) {
    std::vector<double> out;
    const long count = std::lround(std::floor((last - first) / step + 1e-9)) + 1;
    for (long k = 0; k < count; ++k) out.push_back(first + step * static_cast<double>(k));
    return out;
}

ChainSpec RunConfig::chain_spec() const {
    ChainSpec spec = ChainSpec::uniform(chain.n_sites, chain.coupling);
    spec.disorder_mode = chain.disorder_mode;
    return spec;
}

PropagationPlan RunConfig::propagation_plan(double t_final) const {
    PropagationPlan p;
    p.t_final = t_final;
    p.step = std::min(plan.dt, t_final > 0.0 ? t_final : plan.dt);
    p.record_stride = plan.record_stride;
    p.tolerance = plan.tolerance;
    p.verify_step_halving = plan.verify_step_halving;
    return p;
}

void RunConfig::validate() const {
    const ChainSpec spec = chain_spec();
    spec.validate();
    trap.validate(spec);
    require_protocol_name(protocol.name);
    require_protocol_name(disorder.protocol);
    if (!(protocol.tf > 0.0)) throw std::invalid_argument("config: protocol.tf must be positive");
    if (!(disorder.tf > 0.0)) throw std::invalid_argument("config: disorder.tf must be positive");
    propagation_plan(protocol.tf).validate();
    for (const auto& name : sweep.protocols) require_protocol_name(name);
    if (sweep.protocols.empty()) throw std::invalid_argument("config: sweep.protocols is empty");
    require_grid(sweep.tf_grid, "sweep.tf_grid", true);
    require_grid(sweep.omega0_list, "sweep.omega0_list", true);
    require_grid(map.tf_grid, "map.tf_grid", true);
    require_grid(map.d_grid, "map.d_grid", false);
    require_grid(map.omega0_list, "map.omega0_list", true);
    if (!(map.threshold > 0.0 && map.threshold < 1.0)) {
        throw std::invalid_argument("config: map.threshold must lie in (0, 1)");
    }
    if (!(map.refine_step >= 0.0)) throw std::invalid_argument("config: map.refine_step must be >= 0");
    require_grid(disorder.deltas, "disorder.deltas", false);
    if (disorder.realizations < 1) {
        throw std::invalid_argument("config: disorder.realizations must be >= 1");
    }
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
}

bool RunConfig::operator==(const RunConfig& other) const {
    auto trap_tuple = [](const TrapConfig& t) {
        return std::tie(t.omega0, t.omega_f, t.x_start, t.distance, t.truncation_radius,
                        t.sigma_override);
    };
    return chain == other.chain && trap_tuple(trap) == trap_tuple(other.trap) &&
           protocol == other.protocol && plan == other.plan && sweep == other.sweep &&
           map == other.map && disorder == other.disorder && output == other.output &&
           workers == other.workers;
}

RunConfig config_from_json(const json& doc) {
    RunConfig c;
    reject_unknown(doc, "config",
                   {"chain", "trap", "protocol", "plan", "sweep", "map", "disorder", "output",
                    "workers"});
    if (auto it = doc.find("chain"); it != doc.end()) {
        reject_unknown(*it, "chain", {"n_sites", "coupling", "disorder_mode"});
        read(*it, "n_sites", c.chain.n_sites);
        read(*it, "coupling", c.chain.coupling);
        if (auto m = it->find("disorder_mode"); m != it->end()) {
            c.chain.disorder_mode = parse_mode(m->get<std::string>());
        }
    }
    if (auto it = doc.find("trap"); it != doc.end()) {
        reject_unknown(*it, "trap",
                       {"omega0", "omega_f", "x_start", "distance", "truncation_radius", "sigma"});
        read(*it, "omega0", c.trap.omega0);
        read_optional(*it, "omega_f", c.trap.omega_f);
        read(*it, "x_start", c.trap.x_start);
        read(*it, "distance", c.trap.distance);
        read_optional(*it, "truncation_radius", c.trap.truncation_radius);
        read_optional(*it, "sigma", c.trap.sigma_override);
    }
    if (auto it = doc.find("protocol"); it != doc.end()) {
        reject_unknown(*it, "protocol", {"name", "tf"});
        read(*it, "name", c.protocol.name);
        read(*it, "tf", c.protocol.tf);
    }
    if (auto it = doc.find("plan"); it != doc.end()) {
        reject_unknown(*it, "plan", {"dt", "record_stride", "tolerance", "verify_step_halving"});
        read(*it, "dt", c.plan.dt);
        read(*it, "record_stride", c.plan.record_stride);
        read(*it, "tolerance", c.plan.tolerance);
        read(*it, "verify_step_halving", c.plan.verify_step_halving);
    }
    if (auto it = doc.find("sweep"); it != doc.end()) {
        reject_unknown(*it, "sweep", {"protocols", "tf_grid", "omega0_list"});
        read(*it, "protocols", c.sweep.protocols);
        read(*it, "tf_grid", c.sweep.tf_grid);
        read(*it, "omega0_list", c.sweep.omega0_list);
    }
    if (auto it = doc.find("map"); it != doc.end()) {
        reject_unknown(*it, "map", {"tf_grid", "d_grid", "omega0_list", "threshold", "refine_step"});
        read(*it, "tf_grid", c.map.tf_grid);
        read(*it, "d_grid", c.map.d_grid);
        read(*it, "omega0_list", c.map.omega0_list);
        read(*it, "threshold", c.map.threshold);
        read(*it, "refine_step", c.map.refine_step);
    }
    if (auto it = doc.find("disorder"); it != doc.end()) {
        reject_unknown(*it, "disorder", {"deltas", "realizations", "master_seed", "protocol", "tf"});
        read(*it, "deltas", c.disorder.deltas);
        read(*it, "realizations", c.disorder.realizations);
        read(*it, "master_seed", c.disorder.master_seed);
        read(*it, "protocol", c.disorder.protocol);
        read(*it, "tf", c.disorder.tf);
    }
    if (auto it = doc.find("output"); it != doc.end()) {
        reject_unknown(*it, "output", {"directory", "svg"});
        read(*it, "directory", c.output.directory);
        read(*it, "svg", c.output.svg);
    }
    read(doc, "workers", c.workers);
    c.validate();
    return c;
}

json config_to_json(const RunConfig& c) {
    json doc;
    doc["chain"] = {{"n_sites", c.chain.n_sites},
                    {"coupling", c.chain.coupling},
                    {"disorder_mode", mode_name(c.chain.disorder_mode)}};
    doc["trap"] = {{"omega0", c.trap.omega0},
                   {"omega_f", optional_json(c.trap.omega_f)},
                   {"x_start", c.trap.x_start},
                   {"distance", c.trap.distance},
                   {"truncation_radius", optional_json(c.trap.truncation_radius)},
                   {"sigma", optional_json(c.trap.sigma_override)}};
    doc["protocol"] = {{"name", c.protocol.name}, {"tf", c.protocol.tf}};
    doc["plan"] = {{"dt", c.plan.dt},
                   {"record_stride", c.plan.record_stride},
                   {"tolerance", c.plan.tolerance},
                   {"verify_step_halving", c.plan.verify_step_halving}};
    doc["sweep"] = {{"protocols", c.sweep.protocols},
                    {"tf_grid", c.sweep.tf_grid},
                    {"omega0_list", c.sweep.omega0_list}};
    doc["map"] = {{"tf_grid", c.map.tf_grid},
                  {"d_grid", c.map.d_grid},
                  {"omega0_list", c.map.omega0_list},
                  {"threshold", c.map.threshold},
                  {"refine_step", c.map.refine_step}};
    doc["disorder"] = {{"deltas", c.disorder.deltas},
                       {"realizations", c.disorder.realizations},
                       {"master_seed", c.disorder.master_seed},
                       {"protocol", c.disorder.protocol},
                       {"tf", c.disorder.tf}};
    doc["output"] = {{"directory", c.output.directory}, {"svg", c.output.svg}};
    doc["workers"] = c.workers;
    return doc;
}

std::string dump_config(const RunConfig& config) { return config_to_json(config).dump(2) + "\n"; }

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config " + path.string() + ": " + e.what());
    }
    try {
        return config_from_json(doc);
    } catch (const json::exception& e) {
        throw std::invalid_argument("config " + path.string() + ": " + e.what());
    }
}

void save_config(const RunConfig& config, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write config file " + path.string());
    out << dump_config(config);
    if (!out) throw std::runtime_error("failed writing config file " + path.string());
}

ControlProtocol make_protocol(const std::string& name, const TrapConfig& trap, double t_f) {
    if (name == "sta") return sta_polynomial(trap, t_f);
    if (name == "linear") return linear_ramp(trap, t_f);
    if (name == "inverse") return inverse_engineer(polynomial_xc(trap, t_f), trap, t_f);
    throw std::invalid_argument("unknown protocol '" + name + "'");
}

}  // namespace magnon::experiments
