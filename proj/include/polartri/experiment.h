#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polartri/channel.h"
#include "polartri/distill.h"
#include "polartri/table_io.h"
#include "polartri/triortho.h"

namespace polartri {

struct ExperimentConfig {
    std::string command = "sweep-dim";
    ChannelKind channel = ChannelKind::erasure;
    std::vector<double> rates{0.01};
    int n_min = 10;
    int n_max = 12;
    uint64_t samples = 100000;  // Monte Carlo tables
    uint64_t seed = 1;
    std::string k_rule = "auto";         // auto | K | frac:F
    std::string puncture = "random:7";   // first_k | random:SEED | explicit:i,j,...
    uint64_t trials = 10000;             // simulate
    double budget_seconds = 0.0;         // 0 = unlimited

    // Not part of the output identity.
    std::string out_dir;
    std::string cache_dir;
    int threads = 0;
};

// "# key = value" lines covering every field that affects output bytes.
std::string config_header(const ExperimentConfig& cfg);
// Reads key = value lines (a leading "# " is accepted, so a result CSV is itself a config).
// Lines starting with "#!" and lines without '=' are skipped. Unknown keys throw.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
void apply_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void validate(const ExperimentConfig& cfg);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    size_t points = 0;
};

// Ordinary least squares of log2 y on log2 x. Needs two distinct abscissae.
FitResult fit_loglog(const std::vector<std::pair<double, double>>& points);

size_t resolve_puncture_count(const std::string& k_rule, size_t dual_dim);

struct DimensionRow {
    double p = 0.0;
    int n = 0;
    size_t N = 0, i_size = 0, dual_dim = 0;
    double dual_rate = 0.0;
    double log2_eps = 0.0;
    double llr = 0.0;  // log2((1 - eps) / eps)
    bool capacity_ok = true;
};

struct SimulationRow {
    double p = 0.0;
    int n = 0;
    size_t N = 0, k = 0;
    double q = 0.0;
    bool simulated = true;
    ErrorRateEstimate estimate;
};

struct ExperimentOutput {
    std::string csv;
    std::string gnuplot;  // empty when the command has no plot
    bool partial = false;  // budget exhausted before the grid was finished
    std::vector<DimensionRow> dimension_rows;
    std::vector<SimulationRow> simulation_rows;
    std::vector<std::pair<double, FitResult>> fits;  // per noise rate
};

// Cached design table and smallest triply-even code for one grid point.
ReliabilityTable design_table(const ExperimentConfig& cfg, double p, int n);
SearchResult cached_search(const ExperimentConfig& cfg, const ReliabilityTable& table);

ExperimentOutput run_reliability(const ExperimentConfig& cfg);
ExperimentOutput run_search(const ExperimentConfig& cfg);
ExperimentOutput run_build_css(const ExperimentConfig& cfg);
ExperimentOutput run_dimension_sweep(const ExperimentConfig& cfg);
ExperimentOutput run_error_sweep(const ExperimentConfig& cfg);
ExperimentOutput run_simulation(const ExperimentConfig& cfg);
// Dispatches on cfg.command.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

// Fits a CSV produced by sweep-dim or sweep-err: x and y name columns. With p_filter set,
// only rows whose p column equals it are used.
FitResult fit_csv(std::istream& in, const std::string& x_col, const std::string& y_col,
                  std::optional<double> p_filter = std::nullopt);

}  // namespace polartri
