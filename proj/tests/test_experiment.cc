#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polartri/experiment.h"

using namespace polartri;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir;
}

ExperimentConfig small_sweep() {
    ExperimentConfig cfg;
    cfg.command = "sweep-dim";
    cfg.rates = {0.01, 0.05};
    cfg.n_min = 4;
    cfg.n_max = 9;
    return cfg;
}

}  // namespace

TEST(Fit, ExactPowerLaw) {
    std::vector<std::pair<double, double>> pts;
    for (int n = 4; n <= 12; ++n) pts.emplace_back(std::exp2(n), 3.0 * std::pow(std::exp2(n), -0.2));
    auto f = fit_loglog(pts);
    EXPECT_NEAR(f.slope, -0.2, 1e-12);
    EXPECT_NEAR(f.intercept, std::log2(3.0), 1e-12);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
    EXPECT_EQ(f.points, 9u);
    EXPECT_THROW(fit_loglog({{2, 1}}), std::invalid_argument);
    EXPECT_THROW(fit_loglog({{2, 1}, {2, 3}}), std::invalid_argument);
    EXPECT_THROW(fit_loglog({{2, 1}, {4, 0}}), std::domain_error);
}

TEST(Fit, NoisyLineByHand) {
    // log2 points (1, 1), (2, 3), (3, 2): slope 0.5, intercept 1.
    auto f = fit_loglog({{2, 2}, {4, 8}, {8, 4}});
    EXPECT_NEAR(f.slope, 0.5, 1e-12);
    EXPECT_NEAR(f.intercept, 1.0, 1e-12);
    EXPECT_NEAR(f.r_squared, 0.25, 1e-12);
}

TEST(Config, PunctureCountRules) {
    EXPECT_EQ(resolve_puncture_count("auto", 1398), 13u);
    EXPECT_EQ(resolve_puncture_count("auto", 5), 1u);
    EXPECT_EQ(resolve_puncture_count("7", 100), 7u);
    EXPECT_EQ(resolve_puncture_count("frac:0.1", 55), 5u);
    EXPECT_THROW(resolve_puncture_count("0", 10), std::invalid_argument);
    EXPECT_THROW(resolve_puncture_count("7x", 10), std::invalid_argument);
    EXPECT_THROW(resolve_puncture_count("frac:2", 10), std::invalid_argument);
}

TEST(Config, HeaderRoundTrip) {
    ExperimentConfig cfg;
    cfg.command = "simulate";
    cfg.channel = ChannelKind::binary_symmetric;
    cfg.rates = {0.001, 0.0025};
    cfg.n_min = 6;
    cfg.n_max = 8;
    cfg.samples = 12345;
    cfg.seed = 99;
    cfg.k_rule = "frac:0.25";
    cfg.puncture = "explicit:0,3";
    cfg.trials = 777;
    cfg.budget_seconds = 1.5;
    std::istringstream in(config_header(cfg) + "#! table whatever\nn,N\n1,2\n");
    auto back = parse_config(in);
    EXPECT_EQ(config_header(back), config_header(cfg));
    EXPECT_EQ(back.rates, cfg.rates);
    std::istringstream bad("# colour = blue\n");
    EXPECT_THROW(parse_config(bad), std::invalid_argument);
}

TEST(Config, Validation) {
    auto cfg = small_sweep();
    cfg.n_max = 21;
    EXPECT_THROW(validate(cfg), std::invalid_argument);
    cfg.n_max = 20;
    EXPECT_NO_THROW(validate(cfg));
    cfg.channel = ChannelKind::binary_symmetric;
    EXPECT_THROW(validate(cfg), std::invalid_argument);
    cfg.n_max = 16;
    EXPECT_NO_THROW(validate(cfg));
    cfg.rates = {0.7};
    EXPECT_THROW(validate(cfg), std::domain_error);
    cfg = small_sweep();
    cfg.n_min = 0;
    EXPECT_THROW(validate(cfg), std::invalid_argument);
}

TEST(Experiment, RegenerationFromCsvIsByteIdentical) {
    auto cfg = small_sweep();
    auto first = run_experiment(cfg);
    std::istringstream in(first.csv);
    auto again = run_experiment(parse_config(in));
    EXPECT_EQ(again.csv, first.csv);
    EXPECT_EQ(again.gnuplot, first.gnuplot);
    EXPECT_FALSE(first.partial);
    EXPECT_EQ(first.dimension_rows.size(), 12u);
    EXPECT_NE(first.csv.find("channel,p,n,N,I_size,dual_dim,dual_rate,log2_eps,llr,neg_log2_eps,capacity_ok\n"),
              std::string::npos);
}

TEST(Experiment, CacheDoesNotChangeOutput) {
    auto dir = fresh_dir("polartri_experiment_cache");
    for (auto kind : {ChannelKind::erasure, ChannelKind::binary_symmetric}) {
        auto cfg = small_sweep();
        cfg.channel = kind;
        cfg.n_max = 7;
        cfg.samples = 400;
        auto plain = run_experiment(cfg);
        cfg.cache_dir = dir.string();
        auto cold = run_experiment(cfg);
        auto warm = run_experiment(cfg);
        EXPECT_EQ(cold.csv, plain.csv);
        EXPECT_EQ(warm.csv, plain.csv);
        // Damage every cached file; the run rebuilds them and still agrees.
        for (const auto& entry : std::filesystem::directory_iterator(dir)) std::ofstream(entry.path(), std::ios::trunc) << "x";
        EXPECT_EQ(run_experiment(cfg).csv, plain.csv);
        EXPECT_EQ(run_experiment(cfg).csv, plain.csv);
    }
    std::filesystem::remove_all(dir);
}

TEST(Experiment, FitLinesMatchFitCommand) {
    auto out = run_experiment(small_sweep());
    ASSERT_EQ(out.fits.size(), 2u);
    for (const auto& [p, f] : out.fits) {
        std::istringstream in(out.csv);
        auto g = fit_csv(in, "N", "dual_rate", p);
        EXPECT_DOUBLE_EQ(g.slope, f.slope);
        EXPECT_EQ(g.points, 6u);
    }
    EXPECT_NE(out.csv.find("#! fit p=0.01 slope="), std::string::npos);
    std::istringstream in(out.csv);
    EXPECT_THROW(fit_csv(in, "N", "missing"), std::invalid_argument);
}

TEST(Experiment, ErrorSweepAndSimulation) {
    auto cfg = small_sweep();
    cfg.command = "sweep-err";
    auto err = run_experiment(cfg);
    EXPECT_EQ(err.csv.find("#! fit"), std::string::npos);
    for (const auto& r : err.dimension_rows) {
        EXPECT_NEAR(r.llr, std::log2(1 - std::exp2(r.log2_eps)) - r.log2_eps, 1e-9);
    }

    cfg.command = "simulate";
    cfg.rates = {0.05};
    cfg.n_min = 5;
    cfg.n_max = 6;
    cfg.trials = 3000;
    auto sim = run_experiment(cfg);
    ASSERT_EQ(sim.simulation_rows.size(), 2u);
    for (const auto& r : sim.simulation_rows) {
        EXPECT_TRUE(r.simulated);
        EXPECT_GT(r.estimate.trials, 0u);
        EXPECT_EQ(r.k, 1u);
    }
    EXPECT_NE(sim.csv.find("n,N,k,p,q,trials,bit_error,ci_lo,ci_hi,word_error,union_bound_log2,seed,status\n"),
              std::string::npos);
    std::istringstream in(sim.csv);
    EXPECT_EQ(run_experiment(parse_config(in)).csv, sim.csv);
}

TEST(Experiment, BudgetMarksPartialOutput) {
    auto cfg = small_sweep();
    cfg.budget_seconds = 1e-9;
    auto out = run_experiment(cfg);
    EXPECT_TRUE(out.partial);
    EXPECT_NE(out.csv.find("#! partial = true\n"), std::string::npos);
    EXPECT_LT(out.dimension_rows.size(), 12u);
}

TEST(Experiment, BuildCssWritesCodes) {
    auto dir = fresh_dir("polartri_experiment_codes");
    auto cfg = small_sweep();
    cfg.command = "build-css";
    cfg.rates = {0.01};
    cfg.n_min = 4;
    cfg.n_max = 6;
    cfg.out_dir = dir.string();
    auto out = run_experiment(cfg);
    EXPECT_NE(out.csv.find("channel,p,n,N,block_len,k,dual_dim,h0_rows,g_rows,digest\n"), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(dir / "bec_p0.01_n6.ptc"));
    std::filesystem::remove_all(dir);
    cfg.command = "nonsense";
    EXPECT_THROW(run_experiment(cfg), std::invalid_argument);
}
