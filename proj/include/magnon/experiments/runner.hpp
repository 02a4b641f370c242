#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "magnon/experiments/config.hpp"
#include "magnon/oracle.hpp"
#include "magnon/propagator.hpp"

namespace magnon::experiments {

// ---------------------------------------------------------------- analysis

/// (abscissa, value) samples sorted by abscissa.
using Curve = std::vector<std::pair<double, double>>;

/// First abscissa where the curve rises through `level` (value below level
/// at one sample and at or above it at the next), linearly interpolated.
std::optional<double> first_upward_crossing(const Curve& curve, double level);

/// Least-squares slope of y = v x through the origin.
double fit_through_origin(const std::vector<double>& x, const std::vector<double>& y);

struct QuadraticFit {
    double coefficient = 0.0;  ///< c in y = c x^2
    double r_squared = 0.0;
    int points = 0;
};

/// Least-squares fit of y = c x^2; R^2 is measured against the mean of y.
QuadraticFit fit_quadratic_through_origin(const std::vector<double>& x,
                                          const std::vector<double>& y);

// --------------------------------------------------------------- evolution

struct BoundarySample {
    double time = 0.0;
    double centre = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

struct EvolutionResult {
    std::string protocol;
    double tf = 0.0;
    std::vector<double> sites;  ///< x_n
    std::vector<double> times;  ///< recorded times
    std::vector<std::vector<double>> magnetization;  ///< [time][site]
    std::vector<FidelitySample> fidelity_series;
    std::vector<BoundarySample> boundary;
    std::vector<DeviationSample> deviation;
    double final_fidelity = 0.0;
    std::optional<double> halving_agreement;
    std::vector<std::string> warnings;
    double wall_seconds = 0.0;
};

EvolutionResult compute_evolution(const RunConfig& config);
/// heatmap.csv, fidelity.csv, trap_boundary.csv, centroid.csv, heatmap.svg.
void write_evolution(const EvolutionResult& result, const RunConfig& config,
                     const std::filesystem::path& dir);
EvolutionResult run_evolution(const RunConfig& config);

// ------------------------------------------------------------------ sweeps

struct SweepRecord {
    std::string protocol;
    double omega0 = 0.0;
    double tf = 0.0;
    double d = 0.0;
    double fidelity = 0.0;
    double wall_seconds = 0.0;
};

/// Final target fidelity of one transport run on `chain`.
double transport_fidelity(const RunConfig& config, const ChainSpec& chain, const TrapConfig& trap,
                          const std::string& protocol, double tf);

struct SweepResult {
    std::vector<SweepRecord> records;  ///< sorted by (protocol, omega0, tf)
    std::vector<SweepRecord> peaks;    ///< interior local maxima per curve
};

SweepResult compute_tf_sweep(const RunConfig& config);
/// sweep.csv and peaks.csv.
void write_tf_sweep(const SweepResult& result, const RunConfig& config,
                    const std::filesystem::path& dir);
SweepResult run_tf_sweep(const RunConfig& config);

struct TransitionRecord {
    double omega0 = 0.0;
    double d = 0.0;
    std::optional<double> t_star;  ///< crossing of the map threshold
    std::optional<double> t_low;   ///< crossing of 0.05
    std::optional<double> t_high;  ///< crossing of 0.95
};

struct SpeedLimit {
    double omega0 = 0.0;
    double v_b = 0.0;
    int fitted_points = 0;
    std::vector<double> excluded_d;
};

struct MapResult {
    std::vector<SweepRecord> records;  ///< sorted by (omega0, d, tf), refinement included
    std::vector<TransitionRecord> transitions;
    std::vector<SpeedLimit> speed_limits;
};

MapResult compute_dt_map(const RunConfig& config);
/// dt_map.csv, transitions.csv and speed_limit.csv.
void write_dt_map(const MapResult& result, const RunConfig& config,
                  const std::filesystem::path& dir);
MapResult run_dt_map(const RunConfig& config);

// ---------------------------------------------------------------- disorder

struct EnsembleRecord {
    double delta = 0.0;
    int realization = 0;
    std::uint64_t seed = 0;
    double fidelity = 0.0;
};

struct EnsembleSummary {
    double delta = 0.0;
    double mean = 0.0;
    double std = 0.0;  ///< sample standard deviation (n - 1); 0 for a single member
    int count = 0;
};

struct EnsembleSeriesPoint {
    double delta = 0.0;
    double time = 0.0;
    double mean = 0.0;
    double std = 0.0;
};

struct EnsembleResult {
    std::vector<EnsembleRecord> records;  ///< sorted by (delta, realization)
    std::vector<EnsembleSummary> summary;
    std::vector<EnsembleSeriesPoint> series;
    QuadraticFit fit;  ///< 1 - mean F against delta over delta in [0.01, 0.2]
};

/// Aggregates member rows per delta, in order of first appearance.
std::vector<EnsembleSummary> summarize(const std::vector<EnsembleRecord>& records);

EnsembleResult compute_disorder_ensemble(const RunConfig& config);
/// ensemble.csv, summary.csv, ensemble_series.csv and fit.csv.
void write_disorder_ensemble(const EnsembleResult& result, const RunConfig& config,
                             const std::filesystem::path& dir);
EnsembleResult run_disorder_ensemble(const RunConfig& config);

// -------------------------------------------------------------- field dump

/// field.csv with B_n(t) at the recording cadence of the configured protocol.
void run_field_dump(const RunConfig& config);

/// metadata.json: wall time, timestamp and the effective config. Kept apart
/// from the CSV outputs so those stay byte-identical between runs.
void write_metadata(const std::filesystem::path& dir, const std::string& command,
                    const RunConfig& config, double wall_seconds,
                    const std::vector<std::string>& notes = {});

}  // namespace magnon::experiments
