// Command-line front end: evolve, sweep-tf, map-dt, disorder, field-dump.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "magnon/experiments/config.hpp"
#include "magnon/experiments/csv.hpp"
#include "magnon/experiments/runner.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, CommonOptions& opts) {
    sub->add_option("--config", opts.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--workers", opts.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opts.seed, "master seed for disorder realizations");
}

magnon::experiments::RunConfig resolve(const CommonOptions& opts) {
    using namespace magnon::experiments;
    RunConfig config = opts.config_path.empty() ? RunConfig{} : load_config(opts.config_path);
    if (!opts.out_dir.empty()) config.output.directory = opts.out_dir;
    if (opts.workers) config.workers = *opts.workers;
    if (opts.seed) config.disorder.master_seed = *opts.seed;
    config.validate();
    if (auto w = config.trap.mapping_warning(config.chain_spec())) {
        std::cerr << "warning: " << *w << '\n';
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace magnon::experiments;
    CLI::App app{"Magnon transport in a Heisenberg spin chain"};
    app.require_subcommand(1);

    CommonOptions opts;
    auto* evolve = app.add_subcommand("evolve", "single evolution: magnetization heatmap and fidelity");
    auto* sweep = app.add_subcommand("sweep-tf", "final fidelity against operation time");
    auto* map = app.add_subcommand("map-dt", "fidelity over (tf, d) and speed-limit extraction");
    auto* disorder = app.add_subcommand("disorder", "disorder-averaged fidelity ensemble");
    auto* field = app.add_subcommand("field-dump", "sample the applied field B_n(t)");
    auto* defaults = app.add_subcommand("print-config", "print the default configuration");
    for (auto* sub : {evolve, sweep, map, disorder, field, defaults}) add_common(sub, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig config = resolve(opts);
        if (defaults->parsed()) {
            std::cout << dump_config(config);
        } else if (evolve->parsed()) {
            const auto r = run_evolution(config);
            for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
            std::cout << "protocol=" << r.protocol << " tf=" << format_number(r.tf)
                      << " final_fidelity=" << format_number(r.final_fidelity) << '\n';
        } else if (sweep->parsed()) {
            const auto r = run_tf_sweep(config);
            std::cout << "rows=" << r.records.size() << " peaks=" << r.peaks.size() << '\n';
        } else if (map->parsed()) {
            const auto r = run_dt_map(config);
            for (const auto& l : r.speed_limits) {
                std::cout << "omega0=" << format_number(l.omega0) << " v_b=" << format_number(l.v_b)
                          << " fitted=" << l.fitted_points << " excluded=" << l.excluded_d.size()
                          << '\n';
            }
        } else if (disorder->parsed()) {
            const auto r = run_disorder_ensemble(config);
            for (const auto& s : r.summary) {
                std::cout << "delta=" << format_number(s.delta) << " mean=" << format_number(s.mean)
                          << " std=" << format_number(s.std) << " count=" << s.count << '\n';
            }
            std::cout << "quadratic_fit c=" << format_number(r.fit.coefficient)
                      << " r2=" << format_number(r.fit.r_squared) << '\n';
        } else if (field->parsed()) {
            run_field_dump(config);
        }
        if (!defaults->parsed()) std::cout << "outputs in " << config.output.directory << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
