// polartri: reliability tables, triply-even searches, tri-orthogonal codes and sweeps.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "polartri/experiment.h"

namespace {

using polartri::ExperimentConfig;

struct Flags {
    std::string config, channel, p, k_rule, puncture, out, cache;
    int n = 0, n_min = 0, n_max = 0, threads = 0;
    uint64_t samples = 0, seed = 0, trials = 0;
    double budget = 0;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "Config file of key = value lines (a result CSV works)");
    sub->add_option("--channel", f.channel, "bec or bsc");
    sub->add_option("--p", f.p, "Noise rate(s), comma separated");
    sub->add_option("--n", f.n, "Single block exponent (sets n-min and n-max)");
    sub->add_option("--n-min", f.n_min, "Smallest block exponent");
    sub->add_option("--n-max", f.n_max, "Largest block exponent");
    sub->add_option("--samples", f.samples, "Monte Carlo samples per BSC table");
    sub->add_option("--seed", f.seed, "RNG seed");
    sub->add_option("--k-rule", f.k_rule, "Puncture count: auto, K or frac:F");
    sub->add_option("--puncture", f.puncture, "Puncture rule: first_k, random:SEED or explicit:i,j,...");
    sub->add_option("--trials", f.trials, "Simulation trials per point");
    sub->add_option("--out", f.out, "Output directory (default: CSV to stdout)");
    sub->add_option("--cache", f.cache, "Table cache directory (default: $POLAR_CACHE_DIR)");
    sub->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
    sub->add_option("--budget-seconds", f.budget, "Stop starting new grid points after this long");
}

ExperimentConfig build_config(const std::string& command, CLI::App* sub, const Flags& f) {
    ExperimentConfig cfg;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw std::runtime_error("cannot open config " + f.config);
        cfg = polartri::parse_config(in, cfg);
    }
    cfg.command = command;
    auto given = [&](const char* name) { return sub->count(name) > 0; };
    if (given("--channel")) cfg.channel = polartri::parse_channel_kind(f.channel);
    if (given("--p")) polartri::apply_config_value(cfg, "p", f.p);
    if (given("--n")) cfg.n_min = cfg.n_max = f.n;
    if (given("--n-min")) cfg.n_min = f.n_min;
    if (given("--n-max")) cfg.n_max = f.n_max;
    if (given("--samples")) cfg.samples = f.samples;
    if (given("--seed")) cfg.seed = f.seed;
    if (given("--k-rule")) cfg.k_rule = f.k_rule;
    if (given("--puncture")) cfg.puncture = f.puncture;
    if (given("--trials")) cfg.trials = f.trials;
    if (given("--out")) cfg.out_dir = f.out;
    if (given("--cache")) cfg.cache_dir = f.cache;
    if (given("--threads")) cfg.threads = f.threads;
    if (given("--budget-seconds")) cfg.budget_seconds = f.budget;
    return cfg;
}

int emit(const ExperimentConfig& cfg, const polartri::ExperimentOutput& out) {
    if (cfg.out_dir.empty()) {
        std::cout << out.csv;
    } else {
        std::filesystem::path dir(cfg.out_dir);
        std::filesystem::create_directories(dir);
        std::ofstream(dir / (cfg.command + ".csv"), std::ios::binary) << out.csv;
        if (!out.gnuplot.empty()) std::ofstream(dir / (cfg.command + ".gp"), std::ios::binary) << out.gnuplot;
        std::cerr << "wrote " << (dir / (cfg.command + ".csv")).string() << '\n';
    }
    for (const auto& [p, f] : out.fits) {
        std::cerr << "p=" << p << " slope=" << f.slope << " r^2=" << f.r_squared << " points=" << f.points << '\n';
    }
    if (out.partial) {
        std::cerr << "budget exhausted; output is partial\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polar-code constructions of tri-orthogonal codes for magic-state distillation"};
    app.require_subcommand(1);

    Flags flags;
    const char* commands[][2] = {
        {"reliability", "Bhattacharyya table per synthetic channel"},
        {"search", "Smallest polar code with a triply-even dual"},
        {"build-css", "Puncture the smallest code into a tri-orthogonal code"},
        {"simulate", "Monte Carlo decoder failure of the punctured code"},
        {"sweep-dim", "Dual dimension vs block size, with log-log fits"},
        {"sweep-err", "Code threshold (LLR) vs block size"},
    };
    std::vector<std::pair<std::string, CLI::App*>> subs;
    for (auto& c : commands) {
        auto* sub = app.add_subcommand(c[0], c[1]);
        add_common(sub, flags);
        subs.emplace_back(c[0], sub);
    }

    std::string fit_in, fit_x = "N", fit_y = "dual_rate";
    double fit_p = 0;
    auto* fit = app.add_subcommand("fit", "Log-log least-squares fit of two CSV columns");
    fit->add_option("--in", fit_in, "CSV file")->required();
    fit->add_option("--x", fit_x, "Abscissa column");
    fit->add_option("--y", fit_y, "Ordinate column");
    fit->add_option("--p", fit_p, "Only rows with this noise rate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (fit->parsed()) {
            std::ifstream in(fit_in);
            if (!in) throw std::runtime_error("cannot open " + fit_in);
            std::optional<double> filter;
            if (fit->count("--p")) filter = fit_p;
            auto r = polartri::fit_csv(in, fit_x, fit_y, filter);
            std::cout << "slope,intercept,r_squared,points\n"
                      << r.slope << ',' << r.intercept << ',' << r.r_squared << ',' << r.points << '\n';
            return 0;
        }
        for (auto& [name, sub] : subs) {
            if (!sub->parsed()) continue;
            auto cfg = build_config(name, sub, flags);
            return emit(cfg, polartri::run_experiment(cfg));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
