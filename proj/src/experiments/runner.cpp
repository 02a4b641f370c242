#include "magnon/experiments/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "magnon/experiments/csv.hpp"
#include "magnon/experiments/svg.hpp"
#include "magnon/experiments/worker_pool.hpp"

namespace magnon::experiments {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kSharpLow = 0.05;
constexpr double kSharpHigh = 0.95;
constexpr double kFitDeltaMin = 0.01;
constexpr double kFitDeltaMax = 0.2;

TrapConfig with_frequency(TrapConfig trap, double omega0) {
    trap.omega0 = omega0;
    return trap;
}

TrapConfig with_distance(TrapConfig trap, double d) {
    trap.distance = d;
    return trap;
}

Curve curve_of(const std::vector<SweepRecord>& records) {
    Curve c;
    c.reserve(records.size());
    for (const auto& r : records) c.emplace_back(r.tf, r.fidelity);
    return c;
}

}  // namespace

// ---------------------------------------------------------------- analysis

std::optional<double> first_upward_crossing(const Curve& curve, double level) {
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        const auto [x0, y0] = curve[i];
        const auto [x1, y1] = curve[i + 1];
        if (y0 < level && y1 >= level) {
            return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
        }
    }
    return std::nullopt;
}

double fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.empty()) {
        throw std::invalid_argument("fit_through_origin: need matching non-empty samples");
    }
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_through_origin: degenerate abscissae");
    return sxy / sxx;
}

QuadraticFit fit_quadratic_through_origin(const std::vector<double>& x,
                                          const std::vector<double>& y) {
    std::vector<double> x2(x.size());
    std::transform(x.begin(), x.end(), x2.begin(), [](double v) { return v * v; });
    QuadraticFit fit;
    fit.coefficient = fit_through_origin(x2, y);
    fit.points = static_cast<int>(x.size());
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - fit.coefficient * x2[i];
        ss_res += r * r;
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    return fit;
}

// --------------------------------------------------------------- evolution

EvolutionResult compute_evolution(const RunConfig& config) {
    config.validate();
    const auto start = Clock::now();
    const ChainSpec chain = config.chain_spec();
    const TrapConfig& trap = config.trap;
    const double tf = config.protocol.tf;
    const ControlProtocol protocol = make_protocol(config.protocol.name, trap, tf);
    const PropagationPlan plan = config.propagation_plan(tf);

    EvolutionResult result;
    result.protocol = config.protocol.name;
    result.tf = tf;
    if (auto w = trap.mapping_warning(chain)) result.warnings.push_back(*w);

    const WaveState psi0 = gaussian_packet(trap.x_start, trap, chain);
    const WaveState target = target_packet(trap, chain);
    if (auto w = localization_warning(psi0)) result.warnings.push_back(*w);

    for (int i = 0; i < chain.n_sites; ++i) result.sites.push_back(chain.site_position(i));

    const SubspaceHamiltonian hamiltonian(chain, trap, protocol);
    const double radius = trap.truncation(chain);
    Trajectory recorded;
    const WaveState final_state = propagate(psi0, hamiltonian, plan, [&](const WaveState& s) {
        result.times.push_back(s.time);
        result.magnetization.push_back(local_magnetization(s));
        result.fidelity_series.push_back({s.time, fidelity(target, s), s.norm()});
        const double centre = protocol.position(s.time);
        result.boundary.push_back({s.time, centre, centre - radius, centre + radius});
        recorded.push_back(s);
    });
    result.final_fidelity = fidelity(target, final_state);

    if (plan.verify_step_halving) {
        PropagationPlan half = plan;
        half.step = plan.effective_step() / 2.0;
        const WaveState refined = propagate(psi0, hamiltonian, half);
        result.halving_agreement = fidelity(final_state, refined);
        if (*result.halving_agreement < 1.0 - plan.tolerance) {
            throw PropagationError("evolve: step-halving disagreement " +
                                   format_number(1.0 - *result.halving_agreement) +
                                   " exceeds tolerance " + format_number(plan.tolerance));
        }
    }

    const auto classical = classical_trajectory(protocol, {trap.x_start, 0.0}, tf, plan.step);
    result.deviation = ehrenfest_deviation(recorded, chain, classical);
    result.wall_seconds = seconds_since(start);
    return result;
}

void write_evolution(const EvolutionResult& result, const RunConfig& config,
                     const std::filesystem::path& dir) {
    ensure_directory(dir);
    {
        CsvWriter csv(dir / "heatmap.csv", {"t", "site", "x_n", "sz"});
        for (std::size_t k = 0; k < result.times.size(); ++k) {
            for (std::size_t s = 0; s < result.sites.size(); ++s) {
                csv.field(result.times[k])
                    .field(static_cast<long long>(s + 1))
                    .field(result.sites[s])
                    .field(result.magnetization[k][s])
                    .end_row();
            }
        }
        csv.close();
    }
    {
        CsvWriter csv(dir / "fidelity.csv", {"t", "fidelity", "norm"});
        for (const auto& f : result.fidelity_series) {
            csv.field(f.time).field(f.fidelity).field(f.norm).end_row();
        }
        csv.close();
    }
    {
        CsvWriter csv(dir / "trap_boundary.csv", {"t", "x0", "lower", "upper"});
        for (const auto& b : result.boundary) {
            csv.field(b.time).field(b.centre).field(b.lower).field(b.upper).end_row();
        }
        csv.close();
    }
    {
        CsvWriter csv(dir / "centroid.csv", {"t", "x_chain", "x_classical", "deviation"});
        for (const auto& d : result.deviation) {
            csv.field(d.time).field(d.chain_centroid).field(d.classical_position).field(d.deviation).end_row();
        }
        csv.close();
    }
    if (config.output.svg) {
        HeatmapOverlay lower;
        HeatmapOverlay upper;
        for (const auto& b : result.boundary) {
            lower.times.push_back(b.time);
            lower.positions.push_back(b.lower);
            upper.times.push_back(b.time);
            upper.positions.push_back(b.upper);
        }
        write_heatmap_svg(dir / "heatmap.svg", result.times, result.sites, result.magnetization,
                          {lower, upper});
    }
}

EvolutionResult run_evolution(const RunConfig& config) {
    EvolutionResult result = compute_evolution(config);
    write_evolution(result, config, config.output.directory);
    auto notes = result.warnings;
    notes.push_back("final_fidelity=" + format_number(result.final_fidelity));
    write_metadata(config.output.directory, "evolve", config, result.wall_seconds, notes);
    return result;
}

// ------------------------------------------------------------------ sweeps

double transport_fidelity(const RunConfig& config, const ChainSpec& chain, const TrapConfig& trap,
                          const std::string& protocol, double tf) {
    PropagationPlan plan = config.propagation_plan(tf);
    plan.record_stride = std::numeric_limits<int>::max();
    plan.verify_step_halving = false;
    const ControlProtocol control = make_protocol(protocol, trap, tf);
    const SubspaceHamiltonian hamiltonian(chain, trap, control);
    const WaveState final_state =
        propagate(gaussian_packet(trap.x_start, trap, chain), hamiltonian, plan);
    return fidelity(target_packet(trap, chain), final_state);
}

SweepResult compute_tf_sweep(const RunConfig& config) {
    config.validate();
    const ChainSpec chain = config.chain_spec();
    SweepResult result;
    for (const auto& name : config.sweep.protocols) {
        for (double w : config.sweep.omega0_list) {
            for (double tf : config.sweep.tf_grid) {
                result.records.push_back({name, w, tf, config.trap.distance, 0.0, 0.0});
            }
        }
    }
    std::sort(result.records.begin(), result.records.end(), [](const auto& a, const auto& b) {
        return std::tie(a.protocol, a.omega0, a.tf) < std::tie(b.protocol, b.omega0, b.tf);
    });
    parallel_for(result.records.size(), config.workers, [&](std::size_t i) {
        SweepRecord& r = result.records[i];
        const auto start = Clock::now();
        r.fidelity = transport_fidelity(config, chain, with_frequency(config.trap, r.omega0),
                                        r.protocol, r.tf);
        r.wall_seconds = seconds_since(start);
    });

    // Interior local maxima of each (protocol, omega0) curve.
    for (std::size_t i = 1; i + 1 < result.records.size(); ++i) {
        const auto& prev = result.records[i - 1];
        const auto& cur = result.records[i];
        const auto& next = result.records[i + 1];
        const bool same_curve = prev.protocol == cur.protocol && prev.omega0 == cur.omega0 &&
                                next.protocol == cur.protocol && next.omega0 == cur.omega0;
        if (same_curve && cur.fidelity > prev.fidelity && cur.fidelity > next.fidelity) {
            result.peaks.push_back(cur);
        }
    }
    return result;
}

void write_tf_sweep(const SweepResult& result, const RunConfig&, const std::filesystem::path& dir) {
    ensure_directory(dir);
    for (const auto& [file, rows] : {std::pair{"sweep.csv", &result.records},
                                     std::pair{"peaks.csv", &result.peaks}}) {
        CsvWriter csv(dir / file, {"protocol", "omega0", "tf", "d", "fidelity"});
        for (const auto& r : *rows) {
            csv.field(r.protocol).field(r.omega0).field(r.tf).field(r.d).field(r.fidelity).end_row();
        }
        csv.close();
    }
}

SweepResult run_tf_sweep(const RunConfig& config) {
    const auto start = Clock::now();
    SweepResult result = compute_tf_sweep(config);
    write_tf_sweep(result, config, config.output.directory);
    write_metadata(config.output.directory, "sweep-tf", config, seconds_since(start));
    return result;
}

MapResult compute_dt_map(const RunConfig& config) {
    config.validate();
    const ChainSpec chain = config.chain_spec();
    const auto& m = config.map;
    for (double w : m.omega0_list) {
        for (double d : m.d_grid) {
            with_distance(with_frequency(config.trap, w), d).validate(chain);
        }
    }

    auto evaluate = [&](std::vector<SweepRecord>& rows) {
        parallel_for(rows.size(), config.workers, [&](std::size_t i) {
            SweepRecord& r = rows[i];
            const auto start = Clock::now();
            const TrapConfig trap = with_distance(with_frequency(config.trap, r.omega0), r.d);
            r.fidelity = transport_fidelity(config, chain, trap, "sta", r.tf);
            r.wall_seconds = seconds_since(start);
        });
    };
    auto key = [](const SweepRecord& r) { return std::tie(r.omega0, r.d, r.tf); };

    std::vector<SweepRecord> coarse;
    for (double w : m.omega0_list) {
        for (double d : m.d_grid) {
            for (double tf : m.tf_grid) coarse.push_back({"sta", w, tf, d, 0.0, 0.0});
        }
    }
    std::sort(coarse.begin(), coarse.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    evaluate(coarse);

    // Group by (omega0, d); rows are sorted so each group is contiguous.
    auto groups = [&](const std::vector<SweepRecord>& rows) {
        std::map<std::pair<double, double>, std::vector<SweepRecord>> out;
        for (const auto& r : rows) out[{r.omega0, r.d}].push_back(r);
        return out;
    };

    // Refine every coarse interval that brackets one of the reported crossings.
    std::vector<SweepRecord> extra;
    if (m.refine_step > 0.0) {
        for (const auto& [wd, rows] : groups(coarse)) {
            std::set<std::size_t> intervals;
            for (double level : {kSharpLow, m.threshold, kSharpHigh}) {
                for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
                    if (rows[i].fidelity < level && rows[i + 1].fidelity >= level) {
                        intervals.insert(i);
                        break;
                    }
                }
            }
            for (std::size_t i : intervals) {
                for (double tf = rows[i].tf + m.refine_step; tf < rows[i + 1].tf - 1e-9;
                     tf += m.refine_step) {
                    extra.push_back({"sta", wd.first, tf, wd.second, 0.0, 0.0});
                }
            }
        }
        evaluate(extra);
    }

    MapResult result;
    result.records = coarse;
    result.records.insert(result.records.end(), extra.begin(), extra.end());
    std::sort(result.records.begin(), result.records.end(),
              [&](const auto& a, const auto& b) { return key(a) < key(b); });

    std::map<double, SpeedLimit> limits;
    std::map<double, std::pair<std::vector<double>, std::vector<double>>> fit_data;
    for (const auto& [wd, rows] : groups(result.records)) {
        const Curve curve = curve_of(rows);
        TransitionRecord t{wd.first, wd.second, first_upward_crossing(curve, m.threshold),
                           first_upward_crossing(curve, kSharpLow),
                           first_upward_crossing(curve, kSharpHigh)};
        SpeedLimit& limit = limits[wd.first];
        limit.omega0 = wd.first;
        if (t.t_star && wd.second > 0.0) {
            fit_data[wd.first].first.push_back(*t.t_star);
            fit_data[wd.first].second.push_back(wd.second);
        } else {
            limit.excluded_d.push_back(wd.second);
        }
        result.transitions.push_back(t);
    }
    for (auto& [w, limit] : limits) {
        const auto& [times, distances] = fit_data[w];
        limit.fitted_points = static_cast<int>(times.size());
        limit.v_b = times.empty() ? 0.0 : fit_through_origin(times, distances);
        result.speed_limits.push_back(limit);
    }
    // Report in configuration order.
    std::vector<SpeedLimit> ordered;
    for (double w : m.omega0_list) {
        for (const auto& l : result.speed_limits) {
            if (l.omega0 == w) ordered.push_back(l);
        }
    }
    result.speed_limits = ordered;
    return result;
}

void write_dt_map(const MapResult& result, const RunConfig&, const std::filesystem::path& dir) {
    ensure_directory(dir);
    {
        CsvWriter csv(dir / "dt_map.csv", {"protocol", "omega0", "tf", "d", "fidelity"});
        for (const auto& r : result.records) {
            csv.field(r.protocol).field(r.omega0).field(r.tf).field(r.d).field(r.fidelity).end_row();
        }
        csv.close();
    }
    {
        auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
        CsvWriter csv(dir / "transitions.csv", {"omega0", "d", "t_star", "t_low", "t_high"});
        for (const auto& t : result.transitions) {
            csv.field(t.omega0).field(t.d).field(opt(t.t_star)).field(opt(t.t_low)).field(opt(t.t_high)).end_row();
        }
        csv.close();
    }
    {
        CsvWriter csv(dir / "speed_limit.csv",
                      {"omega0", "v_b", "group_velocity", "lieb_robinson", "fitted_points", "excluded_d"});
        for (const auto& l : result.speed_limits) {
            std::string excluded;
            for (double d : l.excluded_d) excluded += (excluded.empty() ? "" : ";") + format_number(d);
            csv.field(l.omega0)
                .field(l.v_b)
                .field(kGroupVelocityBound)
                .field(kLiebRobinsonBound)
                .field(l.fitted_points)
                .field(excluded)
                .end_row();
        }
        csv.close();
    }
}

MapResult run_dt_map(const RunConfig& config) {
    const auto start = Clock::now();
    MapResult result = compute_dt_map(config);
    write_dt_map(result, config, config.output.directory);
    std::vector<std::string> notes;
    for (const auto& l : result.speed_limits) {
        notes.push_back("omega0=" + format_number(l.omega0) + " v_b=" + format_number(l.v_b));
        for (double d : l.excluded_d) {
            notes.push_back("omega0=" + format_number(l.omega0) + " d=" + format_number(d) +
                            " excluded: no threshold crossing on the grid");
        }
    }
    write_metadata(config.output.directory, "map-dt", config, seconds_since(start), notes);
    return result;
}

// ---------------------------------------------------------------- disorder

std::vector<EnsembleSummary> summarize(const std::vector<EnsembleRecord>& records) {
    std::vector<EnsembleSummary> out;
    std::map<double, std::vector<double>> members;
    for (const auto& r : records) {
        if (!members.count(r.delta)) out.push_back({r.delta, 0.0, 0.0, 0});
        members[r.delta].push_back(r.fidelity);
    }
    for (auto& s : out) {
        const auto& f = members[s.delta];
        s.count = static_cast<int>(f.size());
        s.mean = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
        double ss = 0.0;
        for (double v : f) ss += (v - s.mean) * (v - s.mean);
        s.std = f.size() > 1 ? std::sqrt(ss / static_cast<double>(f.size() - 1)) : 0.0;
    }
    return out;
}

EnsembleResult compute_disorder_ensemble(const RunConfig& config) {
    config.validate();
    const ChainSpec base = config.chain_spec();
    const TrapConfig& trap = config.trap;
    const auto& dis = config.disorder;
    const ControlProtocol protocol = make_protocol(dis.protocol, trap, dis.tf);
    PropagationPlan plan = config.propagation_plan(dis.tf);
    plan.verify_step_halving = false;
    const WaveState psi0 = gaussian_packet(trap.x_start, trap, base);
    const WaveState target = target_packet(trap, base);

    std::vector<double> deltas = dis.deltas;
    std::sort(deltas.begin(), deltas.end());
    deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());

    EnsembleResult result;
    const auto count = static_cast<std::size_t>(dis.realizations);
    for (double delta : deltas) {
        for (std::size_t r = 0; r < count; ++r) {
            result.records.push_back({delta, static_cast<int>(r),
                                      realization_seed(dis.master_seed, r), 0.0});
        }
    }

    std::vector<std::vector<FidelitySample>> series(result.records.size());
    auto run_member = [&](std::size_t i) {
        EnsembleRecord& rec = result.records[i];
        const ChainSpec chain = with_disorder(
            base, {rec.delta, dis.master_seed, static_cast<std::uint64_t>(rec.realization)});
        const SubspaceHamiltonian hamiltonian(chain, trap, protocol);
        const WaveState final_state = propagate(psi0, hamiltonian, plan, [&](const WaveState& s) {
            series[i].push_back({s.time, fidelity(target, s), s.norm()});
        });
        rec.fidelity = fidelity(target, final_state);
    };

    // Without disorder every realization has the same couplings, so one
    // evolution stands for all of them.
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        if (result.records[i].delta != 0.0 || result.records[i].realization == 0) pending.push_back(i);
    }
    parallel_for(pending.size(), config.workers, [&](std::size_t k) { run_member(pending[k]); });
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        if (result.records[i].delta == 0.0 && result.records[i].realization != 0) {
            const std::size_t first = i - static_cast<std::size_t>(result.records[i].realization);
            result.records[i].fidelity = result.records[first].fidelity;
            series[i] = series[first];
        }
    }

    result.summary = summarize(result.records);

    for (std::size_t d = 0; d < deltas.size(); ++d) {
        const std::size_t offset = d * count;
        for (std::size_t k = 0; k < series[offset].size(); ++k) {
            double sum = 0.0;
            for (std::size_t r = 0; r < count; ++r) sum += series[offset + r][k].fidelity;
            const double mean = sum / static_cast<double>(count);
            double ss = 0.0;
            for (std::size_t r = 0; r < count; ++r) {
                const double dev = series[offset + r][k].fidelity - mean;
                ss += dev * dev;
            }
            const double sd = count > 1 ? std::sqrt(ss / static_cast<double>(count - 1)) : 0.0;
            result.series.push_back({deltas[d], series[offset][k].time, mean, sd});
        }
    }

    std::vector<double> x;
    std::vector<double> y;
    for (const auto& s : result.summary) {
        if (s.delta >= kFitDeltaMin - 1e-12 && s.delta <= kFitDeltaMax + 1e-12) {
            x.push_back(s.delta);
            y.push_back(1.0 - s.mean);
        }
    }
    if (!x.empty()) result.fit = fit_quadratic_through_origin(x, y);
    return result;
}

void write_disorder_ensemble(const EnsembleResult& result, const RunConfig&,
                             const std::filesystem::path& dir) {
    ensure_directory(dir);
    {
        CsvWriter csv(dir / "ensemble.csv", {"delta", "realization", "seed", "fidelity"});
        for (const auto& r : result.records) {
            csv.field(r.delta)
                .field(r.realization)
                .field(static_cast<unsigned long long>(r.seed))
                .field(r.fidelity)
                .end_row();
        }
        csv.close();
    }
    {
        CsvWriter csv(dir / "summary.csv", {"delta", "mean_fidelity", "std_fidelity", "count"});
        for (const auto& s : result.summary) csv.field(s.delta).field(s.mean).field(s.std).field(s.count).end_row();
        csv.close();
    }
    {
        CsvWriter csv(dir / "ensemble_series.csv", {"delta", "t", "mean_fidelity", "std_fidelity"});
        for (const auto& p : result.series) csv.field(p.delta).field(p.time).field(p.mean).field(p.std).end_row();
        csv.close();
    }
    {
        CsvWriter csv(dir / "fit.csv", {"model", "coefficient", "r_squared", "points"});
        csv.field("c*delta^2").field(result.fit.coefficient).field(result.fit.r_squared).field(result.fit.points).end_row();
        csv.close();
    }
}

EnsembleResult run_disorder_ensemble(const RunConfig& config) {
    const auto start = Clock::now();
    EnsembleResult result = compute_disorder_ensemble(config);
    write_disorder_ensemble(result, config, config.output.directory);
    write_metadata(config.output.directory, "disorder", config, seconds_since(start),
                   {"rng=mt19937_64 seeded by splitmix64(splitmix64(master_seed) ^ realization)"});
    return result;
}

// -------------------------------------------------------------- field dump

void run_field_dump(const RunConfig& config) {
    config.validate();
    const auto start = Clock::now();
    const ChainSpec chain = config.chain_spec();
    const double tf = config.protocol.tf;
    const ControlProtocol protocol = make_protocol(config.protocol.name, config.trap, tf);
    const PropagationPlan plan = config.propagation_plan(tf);
    const double sample_spacing = plan.effective_step() * plan.record_stride;
    const long samples = std::max(1L, std::lround(std::ceil(tf / sample_spacing - 1e-9)));

    const std::filesystem::path dir = config.output.directory;
    ensure_directory(dir);
    CsvWriter csv(dir / "field.csv", {"t", "site", "x_n", "b_n"});
    for (long k = 0; k <= samples; ++k) {
        const double t = k == samples ? tf : sample_spacing * static_cast<double>(k);
        const auto field = field_profile(t, protocol, config.trap, chain);
        for (int i = 0; i < chain.n_sites; ++i) {
            csv.field(t).field(i + 1).field(chain.site_position(i)).field(field[static_cast<std::size_t>(i)]).end_row();
        }
    }
    csv.close();
    write_metadata(dir, "field-dump", config, seconds_since(start));
}

void write_metadata(const std::filesystem::path& dir, const std::string& command,
                    const RunConfig& config, double wall_seconds,
                    const std::vector<std::string>& notes) {
    ensure_directory(dir);
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    nlohmann::json doc;
    doc["command"] = command;
    doc["timestamp"] = stamp;
    doc["wall_seconds"] = wall_seconds;
    doc["notes"] = notes;
    doc["config"] = config_to_json(config);
    const auto path = dir / "metadata.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace magnon::experiments
