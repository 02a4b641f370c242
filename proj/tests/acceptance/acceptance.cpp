// End-to-end acceptance checks at full scale. Prints one PASS/FAIL line per
// criterion and exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../support/dense_oracles.hpp"
#include "magnon/experiments/runner.hpp"
#include "magnon/oracle.hpp"

using namespace magnon;
using namespace magnon::experiments;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) passed = false;
        detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
    }
};

int default_workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("magnon_acceptance_" + name);
    fs::remove_all(dir);
    return dir;
}

double headline_fidelity(const std::string& protocol, double tf) {
    RunConfig c;
    return transport_fidelity(c, c.chain_spec(), c.trap, protocol, tf);
}

Outcome sta_headline() {
    Outcome o;
    const double f = headline_fidelity("sta", 200.0);
    o.require(std::abs(f - 0.998) <= 0.005, "STA tf=200 F=" + fmt(f) + " (want 0.998+-0.005)");
    return o;
}

Outcome adiabatic_contrast() {
    Outcome o;
    const double fast = headline_fidelity("linear", 200.0);
    const double slow = headline_fidelity("linear", 600.0);
    o.require(std::abs(fast - 0.30) <= 0.05, "linear tf=200 F=" + fmt(fast) + " (want 0.30+-0.05)");
    o.require(std::abs(slow - 0.998) <= 0.005, "linear tf=600 F=" + fmt(slow) + " (want 0.998+-0.005)");
    return o;
}

Outcome breakdown() {
    Outcome o;
    const double f = headline_fidelity("sta", 100.0);
    o.require(f < 0.1, "STA tf=100 F=" + fmt(f) + " (want < 0.1)");
    return o;
}

Outcome speed_limit() {
    Outcome o;
    RunConfig c;
    c.workers = default_workers();
    c.output.directory = scratch("map").string();
    const MapResult map = run_dt_map(c);
    double v_half = std::nan("");
    double v_quarter = std::nan("");
    for (const auto& s : map.speed_limits) {
        if (s.omega0 == 0.5) v_half = s.v_b;
        if (s.omega0 == 0.25) v_quarter = s.v_b;
        o.detail << (o.detail.tellp() > 0 ? "; " : "") << "omega0=" << fmt(s.omega0)
                 << " fitted " << s.fitted_points << " points";
    }
    o.require(v_half >= 0.85 && v_half <= 1.05, "v_b(0.5)=" + fmt(v_half) + " (want [0.85, 1.05])");
    o.require(v_quarter < v_half, "v_b(0.25)=" + fmt(v_quarter) + " < v_b(0.5)");
    o.require(v_half < kGroupVelocityBound && kGroupVelocityBound < kLiebRobinsonBound,
              "v_b(0.5) < 2 < 6");
    return o;
}

Outcome stability_plateau() {
    Outcome o;
    RunConfig c;
    c.workers = default_workers();
    c.sweep.omega0_list = {0.5};
    c.output.directory = scratch("sweep").string();
    const SweepResult sweep = run_tf_sweep(c);

    auto plateau = [&](const std::string& protocol, double& first_good, double& worst_after) {
        first_good = std::nan("");
        worst_after = 1.0;
        for (const auto& r : sweep.records) {
            if (r.protocol != protocol) continue;
            if (std::isnan(first_good)) {
                if (r.fidelity > 0.99) first_good = r.tf;
                continue;
            }
            worst_after = std::min(worst_after, r.fidelity);
        }
        return !std::isnan(first_good) && first_good <= 200.0 && worst_after >= 0.99;
    };
    double sta_first = 0.0;
    double sta_worst = 0.0;
    double lin_first = 0.0;
    double lin_worst = 0.0;
    const bool sta_ok = plateau("sta", sta_first, sta_worst);
    const bool lin_ok = plateau("linear", lin_first, lin_worst);
    o.require(sta_ok, "STA reaches 0.99 at tf=" + fmt(sta_first) + ", minimum afterwards " + fmt(sta_worst));
    o.require(!lin_ok, "linear first >0.99 at tf=" + fmt(lin_first) + ", minimum afterwards " +
                           fmt(lin_worst) + " (must violate)");
    return o;
}

Outcome disorder() {
    Outcome o;
    RunConfig c;
    c.workers = default_workers();
    c.output.directory = scratch("disorder").string();
    const EnsembleResult r = run_disorder_ensemble(c);
    double clean = std::nan("");
    double mild = std::nan("");
    for (const auto& s : r.summary) {
        if (s.delta == 0.0) clean = s.mean;
        if (s.delta == 0.05) mild = s.mean;
        o.detail << (o.detail.tellp() > 0 ? "; " : "") << "delta=" << fmt(s.delta)
                 << " mean=" << fmt(s.mean) << " std=" << fmt(s.std) << " n=" << s.count;
    }
    o.require(clean > 0.999, "delta=0 F=" + fmt(clean) + " (want > 0.999)");
    o.require(mild >= 0.98, "delta=0.05 mean F=" + fmt(mild) + " (want >= 0.98)");
    o.require(r.fit.r_squared > 0.9, "quadratic fit c=" + fmt(r.fit.coefficient) +
                                         " R^2=" + fmt(r.fit.r_squared) + " (want > 0.9)");
    return o;
}

Outcome numerical_integrity() {
    Outcome o;
    const ChainSpec chain = ChainSpec::uniform(251);
    TrapConfig trap;
    const WaveState psi0 = gaussian_packet(trap.x_start, trap, chain);
    const WaveState target = target_packet(trap, chain);

    {
        PropagationPlan plan;
        plan.t_final = 600.0;
        double worst = 0.0;
        for (const std::string name : {"sta", "linear"}) {
            const SubspaceHamiltonian h(chain, trap, make_protocol(name, trap, 600.0));
            propagate(psi0, h, plan, [&](const WaveState& s) {
                worst = std::max(worst, std::abs(s.norm() - 1.0));
            });
        }
        o.require(worst <= 1e-9, "max |norm-1| over tf=600 = " + fmt(worst));
    }
    {
        double worst = 0.0;
        for (auto [name, tf] : {std::pair{"sta", 200.0}, {"linear", 200.0}, {"sta", 100.0}}) {
            const SubspaceHamiltonian h(chain, trap, make_protocol(name, trap, tf));
            PropagationPlan plan;
            plan.t_final = tf;
            const double full = fidelity(target, propagate(psi0, h, plan));
            plan.step /= 2.0;
            const double half = fidelity(target, propagate(psi0, h, plan));
            worst = std::max(worst, std::abs(full - half));
        }
        o.require(worst < 1e-6, "max |F(dt) - F(dt/2)| = " + fmt(worst));
    }
    {
        const ChainSpec small = ChainSpec::uniform(6);
        TrapConfig t6;
        t6.x_start = 2.0;
        t6.distance = 1.0;
        t6.truncation_radius = 50.0;
        double worst = 0.0;
        for (double centre : {0.0, 2.5, 4.0}) {
            const auto frozen = stationary_trap(t6, 3.0, centre);
            const SubspaceHamiltonian h(small, t6, frozen);
            std::vector<double> diagonal(6);
            h.diagonal_at(0.0, diagonal);
            Eigen::MatrixXd dense = testing::to_dense(h.static_part());
            for (int i = 0; i < 6; ++i) dense(i, i) = diagonal[static_cast<std::size_t>(i)];
            WaveState start = basis_state(6, 1);
            start.amplitudes[3] = {0.0, 1.0};
            start.amplitudes.normalize();
            PropagationPlan plan;
            plan.t_final = 3.0;
            const Eigen::VectorXcd got = propagate(start, h, plan).amplitudes;
            worst = std::max(worst, (got - testing::dense_propagator(dense, 3.0) * start.amplitudes).norm());
        }
        o.require(worst <= 1e-8, "N=6 dense oracle error " + fmt(worst));
    }
    {
        double worst = 1.0;
        for (auto [name, tf] : {std::pair{"sta", 200.0}, {"linear", 200.0}, {"sta", 100.0}}) {
            const auto forward = make_protocol(name, trap, tf);
            PropagationPlan plan;
            plan.t_final = tf;
            WaveState there = propagate(psi0, SubspaceHamiltonian(chain, trap, forward), plan);
            there.amplitudes = there.amplitudes.conjugate();
            WaveState back =
                propagate(there, SubspaceHamiltonian(chain, trap, time_reversed(forward)), plan);
            back.amplitudes = back.amplitudes.conjugate();
            worst = std::min(worst, fidelity(back, psi0));
        }
        o.require(worst >= 1.0 - 1e-6, "forward-reverse min F=" + fmt(worst));
    }
    return o;
}

Outcome control_consistency() {
    Outcome o;
    TrapConfig trap;
    const double d = trap.distance;

    double worst_match = 0.0;
    for (double tf : {50.0, 100.0, 200.0, 600.0}) {
        const auto closed = sta_polynomial(trap, tf);
        const auto inverted = inverse_engineer(polynomial_xc(trap, tf), trap, tf);
        for (int k = 0; k < 1000; ++k) {
            const double t = tf * k / 999.0;
            worst_match = std::max(worst_match, std::abs(closed.position(t) - inverted.position(t)));
            worst_match = std::max(worst_match,
                                   std::abs(closed.squared_frequency(t) - inverted.squared_frequency(t)));
        }
    }
    o.require(worst_match <= 1e-10 * d, "sta vs inverse max diff " + fmt(worst_match));

    std::vector<std::pair<TrapConfig, double>> cases;
    for (double tf : {50.0, 100.0, 200.0, 600.0}) cases.emplace_back(trap, tf);
    TrapConfig squeeze = trap;
    squeeze.omega_f = 0.25;
    TrapConfig widen = trap;
    widen.omega_f = 0.85;
    for (double tf : {100.0, 200.0, 400.0}) {
        cases.emplace_back(squeeze, tf);
        cases.emplace_back(widen, tf);
    }

    int failures = 0;
    int checked = 0;
    double worst_end = 0.0;
    for (const auto& [t, tf] : cases) {
        const auto ansatz = polynomial_xc(t, tf);
        const auto report = verify_boundary_conditions(ansatz, tf, 1e-10);
        failures += static_cast<int>(report.failures().size());
        checked += static_cast<int>(report.checks.size());
        const auto protocol = inverse_engineer(ansatz, t, tf);
        const auto path = classical_trajectory(protocol, {t.x_start, 0.0}, tf, 0.01);
        worst_end = std::max({worst_end, std::abs(path.back().state.position - t.x_end()),
                              std::abs(path.back().state.velocity)});
    }
    o.require(failures == 0, std::to_string(checked - failures) + "/" + std::to_string(checked) +
                                 " boundary conditions within 1e-10");
    o.require(worst_end <= 1e-6 * d, "classical end-state error " + fmt(worst_end));
    return o;
}

Outcome reproducibility() {
    Outcome o;
    RunConfig base;
    base.sweep.tf_grid = arange(100.0, 250.0, 50.0);
    base.sweep.omega0_list = {0.5};
    base.disorder.realizations = 16;
    base.disorder.tf = 200.0;
    base.map.omega0_list = {0.5};
    base.map.d_grid = {60.0, 120.0};
    base.map.tf_grid = arange(40.0, 200.0, 20.0);

    struct Job {
        std::string name;
        std::function<void(const RunConfig&)> run;
        std::vector<std::string> files;
    };
    const std::vector<Job> jobs{
        {"evolve", [](const RunConfig& c) { run_evolution(c); },
         {"heatmap.csv", "fidelity.csv", "trap_boundary.csv", "centroid.csv", "heatmap.svg"}},
        {"sweep", [](const RunConfig& c) { run_tf_sweep(c); }, {"sweep.csv", "peaks.csv"}},
        {"map", [](const RunConfig& c) { run_dt_map(c); },
         {"dt_map.csv", "transitions.csv", "speed_limit.csv"}},
        {"disorder", [](const RunConfig& c) { run_disorder_ensemble(c); },
         {"ensemble.csv", "summary.csv", "ensemble_series.csv", "fit.csv"}},
        {"field", [](const RunConfig& c) { run_field_dump(c); }, {"field.csv"}},
    };

    int compared = 0;
    for (const auto& job : jobs) {
        std::vector<fs::path> dirs;
        for (int workers : {1, 4, 4}) {
            RunConfig c = base;
            c.workers = workers;
            c.output.directory = scratch(job.name + "_" + std::to_string(dirs.size())).string();
            job.run(c);
            dirs.emplace_back(c.output.directory);
        }
        for (const auto& file : job.files) {
            const std::string reference = slurp(dirs[0] / file);
            const bool same = !reference.empty() && slurp(dirs[1] / file) == reference &&
                              slurp(dirs[2] / file) == reference;
            if (!same) o.require(false, job.name + "/" + file + " differs");
            ++compared;
        }
    }
    o.require(true, std::to_string(compared) + " files identical across serial, parallel and repeated runs");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    // Optional criterion ids on the command line restrict the run.
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::stoi(argv[i]));

    struct Criterion {
        int id;
        const char* title;
        Outcome (*check)();
    };
    const Criterion criteria[] = {
        {1, "STA headline fidelity", sta_headline},
        {2, "adiabatic contrast", adiabatic_contrast},
        {3, "breakdown below the speed limit", breakdown},
        {4, "speed limit", speed_limit},
        {5, "stability plateau", stability_plateau},
        {6, "disorder ensemble", disorder},
        {7, "numerical integrity", numerical_integrity},
        {8, "control-law consistency", control_consistency},
        {9, "reproducibility", reproducibility},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        bool passed = false;
        std::string detail;
        try {
            Outcome o = c.check();
            passed = o.passed;
            detail = o.detail.str();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!passed) ++failed;
        std::cout << (passed ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title
                  << "): " << detail << " [" << fmt(seconds) << " s]" << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
              << std::endl;
    return failed == 0 ? 0 : 1;
}
