#include "polartri/experiment.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "polartri/digest.h"

namespace polartri {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\"");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, sep);) out.push_back(trim(item));
    return out;
}

bool is_bec(const ExperimentConfig& cfg) { return cfg.channel == ChannelKind::erasure; }

TableRequest table_request(const ExperimentConfig& cfg, double p, int n) {
    TableRequest req;
    req.p = p;
    req.n = n;
    if (is_bec(cfg)) {
        req.method = ReliabilityMethod::exact_bec;
    } else {
        req.method = ReliabilityMethod::monte_carlo_bsc;
        req.samples = cfg.samples;
        req.seed = cfg.seed;
    }
    return req;
}

// Walks the (p, n) grid in output order, stopping early once the budget is spent.
class Grid {
   public:
    explicit Grid(const ExperimentConfig& cfg) : cfg_(cfg), start_(std::chrono::steady_clock::now()) {}

    template <typename F>
    bool for_each(F&& fn) {
        for (double p : cfg_.rates) {
            for (int n = cfg_.n_min; n <= cfg_.n_max; ++n) {
                if (over_budget()) return false;
                fn(p, n);
            }
        }
        return true;
    }

   private:
    bool over_budget() const {
        if (cfg_.budget_seconds <= 0) return false;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count() > cfg_.budget_seconds;
    }
    const ExperimentConfig& cfg_;
    std::chrono::steady_clock::time_point start_;
};

std::string table_line(const ExperimentConfig& cfg, const ReliabilityTable& t) {
    return "#! table " + cache_file_name(table_request(cfg, t.channel ? t.channel->p() : 0.0, t.n)) +
           " digest=" + hex64(table_digest(t)) + "\n";
}

DimensionRow dimension_row(double p, const SearchResult& s) {
    DimensionRow r;
    r.p = p;
    r.n = s.report.n;
    r.N = s.code.length();
    r.i_size = s.report.i_size;
    r.dual_dim = s.report.dual_dim;
    r.dual_rate = static_cast<double>(r.dual_dim) / static_cast<double>(r.N);
    r.log2_eps = s.code.threshold_log2_eps;
    r.llr = r.log2_eps < 0 ? llr_figure_point(s.code) : 0.0;
    r.capacity_ok = s.report.capacity_ok;
    return r;
}

std::string dimension_csv_row(const ExperimentConfig& cfg, const DimensionRow& r) {
    std::ostringstream out;
    out << to_string(cfg.channel) << ',' << num(r.p) << ',' << r.n << ',' << r.N << ',' << r.i_size << ','
        << r.dual_dim << ',' << num(r.dual_rate) << ',' << num(r.log2_eps) << ',' << num(r.llr) << ','
        << num(-r.log2_eps) << ',' << (r.capacity_ok ? 1 : 0) << '\n';
    return out.str();
}

constexpr const char* kDimensionColumns = "channel,p,n,N,I_size,dual_dim,dual_rate,log2_eps,llr,neg_log2_eps,capacity_ok\n";

std::string finish_csv(const ExperimentConfig& cfg, const std::string& notes, const std::string& columns,
                       const std::string& rows, bool partial) {
    std::string csv = config_header(cfg) + notes;
    if (partial) csv += "#! partial = true\n";
    return csv + columns + rows;
}

std::vector<std::pair<double, FitResult>> fit_dimension_rows(const ExperimentConfig& cfg,
                                                             const std::vector<DimensionRow>& rows) {
    std::vector<std::pair<double, FitResult>> fits;
    for (double p : cfg.rates) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& r : rows) {
            if (r.p == p) pts.emplace_back(static_cast<double>(r.N), r.dual_rate);
        }
        if (pts.size() >= 2) fits.emplace_back(p, fit_loglog(pts));
    }
    return fits;
}

std::string plot_script(const std::string& title, const std::string& xlabel, const std::string& ylabel, bool logx,
                        bool logy, int xcol, int ycol, const ExperimentConfig& cfg, const std::string& csv_name) {
    std::ostringstream gp;
    gp << "set datafile separator ','\n";
    gp << "set title '" << title << "'\n";
    gp << "set xlabel '" << xlabel << "'\nset ylabel '" << ylabel << "'\n";
    if (logx) gp << "set logscale x 2\n";
    if (logy) gp << "set logscale y 2\n";
    gp << "set key left top\nset grid\n";
    gp << "plot ";
    for (size_t i = 0; i < cfg.rates.size(); ++i) {
        std::string p = num(cfg.rates[i]);
        gp << (i ? ", \\\n     " : "") << "'" << csv_name << "' using ($2==" << p << " ? $" << xcol << " : 1/0):" << ycol
           << " skip " << 0 << " with linespoints title 'p = " << p << "'";
    }
    gp << "\n";
    return gp.str();
}

}  // namespace

std::string config_header(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "# command = " << cfg.command << '\n';
    out << "# channel = " << to_string(cfg.channel) << '\n';
    out << "# p = ";
    for (size_t i = 0; i < cfg.rates.size(); ++i) out << (i ? "," : "") << num(cfg.rates[i]);
    out << '\n';
    out << "# n_min = " << cfg.n_min << '\n';
    out << "# n_max = " << cfg.n_max << '\n';
    out << "# samples = " << cfg.samples << '\n';
    out << "# seed = " << cfg.seed << '\n';
    out << "# k_rule = " << cfg.k_rule << '\n';
    out << "# puncture = " << cfg.puncture << '\n';
    out << "# trials = " << cfg.trials << '\n';
    out << "# budget_seconds = " << num(cfg.budget_seconds) << '\n';
    return out.str();
}

void apply_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "command") {
        cfg.command = value;
    } else if (key == "channel") {
        cfg.channel = parse_channel_kind(value);
    } else if (key == "p") {
        cfg.rates.clear();
        for (const auto& item : split(value, ',')) cfg.rates.push_back(std::stod(item));
    } else if (key == "n_min") {
        cfg.n_min = std::stoi(value);
    } else if (key == "n_max") {
        cfg.n_max = std::stoi(value);
    } else if (key == "samples") {
        cfg.samples = std::stoull(value);
    } else if (key == "seed") {
        cfg.seed = std::stoull(value);
    } else if (key == "k_rule") {
        cfg.k_rule = value;
    } else if (key == "puncture") {
        cfg.puncture = value;
    } else if (key == "trials") {
        cfg.trials = std::stoull(value);
    } else if (key == "budget_seconds") {
        cfg.budget_seconds = std::stod(value);
    } else if (key == "out") {
        cfg.out_dir = value;
    } else if (key == "cache") {
        cfg.cache_dir = value;
    } else if (key == "threads") {
        cfg.threads = std::stoi(value);
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("#!", 0) == 0) continue;
        std::string body = line;
        if (body.rfind('#', 0) == 0) body = body.substr(1);
        auto eq = body.find('=');
        if (eq == std::string::npos) continue;
        std::string key = trim(body.substr(0, eq));
        if (key.empty() || key.find(',') != std::string::npos) continue;
        apply_config_value(base, key, trim(body.substr(eq + 1)));
    }
    return base;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.rates.empty()) throw std::invalid_argument("at least one noise rate is required");
    if (cfg.n_min < 1 || cfg.n_max < cfg.n_min) throw std::invalid_argument("need 1 <= n_min <= n_max");
    int limit = is_bec(cfg) ? 20 : 16;
    if (cfg.n_max > limit) {
        throw std::invalid_argument("n_max " + std::to_string(cfg.n_max) + " exceeds the supported bound " +
                                    std::to_string(limit) + " for this channel");
    }
    for (double p : cfg.rates) {
        if (is_bec(cfg)) {
            ChannelSpec::erasure(p);
        } else {
            ChannelSpec::binary_symmetric(p);
        }
    }
    if (!is_bec(cfg) && cfg.samples == 0) throw std::invalid_argument("samples must be positive");
    if (cfg.trials == 0) throw std::invalid_argument("trials must be positive");
    parse_puncture_rule(cfg.puncture);
    resolve_puncture_count(cfg.k_rule, 100);
}

FitResult fit_loglog(const std::vector<std::pair<double, double>>& points) {
    size_t m = points.size();
    double sx = 0, sy = 0;
    for (auto [x, y] : points) {
        if (!(x > 0) || !(y > 0)) throw std::domain_error("fit_loglog needs positive data");
        sx += std::log2(x);
        sy += std::log2(y);
    }
    if (m < 2) throw std::invalid_argument("fit_loglog needs at least two points");
    double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : points) {
        double dx = std::log2(x) - mx, dy = std::log2(y) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0) throw std::invalid_argument("fit_loglog needs two distinct abscissae");
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy == 0 ? 1.0 : std::min(1.0, sxy * sxy / (sxx * syy));
    f.points = m;
    return f;
}

size_t resolve_puncture_count(const std::string& k_rule, size_t dual_dim) {
    if (k_rule == "auto") return default_puncture_count(dual_dim);
    if (k_rule.rfind("frac:", 0) == 0) {
        double f = std::stod(k_rule.substr(5));
        if (!(f > 0 && f <= 1)) throw std::invalid_argument("k_rule fraction must lie in (0, 1]");
        return std::max<size_t>(1, static_cast<size_t>(std::floor(f * static_cast<double>(dual_dim))));
    }
    size_t pos = 0;
    unsigned long long k = std::stoull(k_rule, &pos);
    if (pos != k_rule.size() || k == 0) throw std::invalid_argument("k_rule must be auto, frac:F or a positive integer");
    return static_cast<size_t>(k);
}

ReliabilityTable design_table(const ExperimentConfig& cfg, double p, int n) {
    return load_or_compute_table(table_request(cfg, p, n), resolve_cache_dir(cfg.cache_dir), cfg.threads);
}

SearchResult cached_search(const ExperimentConfig& cfg, const ReliabilityTable& table) {
    auto dir = resolve_cache_dir(cfg.cache_dir);
    std::string digest = hex64(table_digest(table));
    std::filesystem::path path;
    if (dir) {
        path = *dir / ("search_" + cache_file_name(table_request(cfg, table.channel ? table.channel->p() : 0.0, table.n)) +
                       ".json");
        std::ifstream in(path);
        if (in) {
            try {
                auto j = nlohmann::json::parse(in);
                if (j.at("table_digest") == digest) {
                    size_t prefix = j.at("prefix");
                    SearchResult res{code_from_info_set(table, monomial_set_from_json(j.at("info_set"))), {}};
                    auto& r = res.report;
                    r.channel = table.channel;
                    r.n = table.n;
                    r.prefix = prefix;
                    r.i_size = res.code.dimension();
                    r.dual_dim = res.code.length() - r.i_size;
                    r.threshold_log2_eps = res.code.threshold_log2_eps;
                    double rate = static_cast<double>(r.i_size) / static_cast<double>(res.code.length());
                    r.capacity_ok = !table.channel || rate <= capacity(*table.channel);
                    return res;
                }
            } catch (const std::exception& e) {
                std::cerr << "warning: cached search " << path << " unreadable (" << e.what() << "); recomputing\n";
            }
        }
    }
    auto res = smallest_triply_even_code(table);
    if (dir) {
        std::filesystem::create_directories(*dir);
        nlohmann::json j{{"table_digest", digest},
                         {"prefix", res.report.prefix},
                         {"info_set", monomial_set_to_json(res.code.info_set)}};
        std::ofstream(path) << j.dump() << '\n';
    }
    return res;
}

ExperimentOutput run_reliability(const ExperimentConfig& cfg) {
    validate(cfg);
    ExperimentOutput out;
    std::string notes, rows;
    out.partial = !Grid(cfg).for_each([&](double p, int n) {
        auto t = design_table(cfg, p, n);
        notes += table_line(cfg, t);
        char buf[96];
        for (size_t a = 0; a < t.size(); ++a) {
            double se = t.log2_stderr.empty() ? 0.0 : std::exp2(t.log2_stderr[a]);
            std::snprintf(buf, sizeof buf, ",%.17g,%.6g\n", t.log2_z[a], se);
            rows += num(p) + ',' + std::to_string(n) + ',' + std::to_string(a) + ',' +
                    to_string(monomial_from_channel_index(static_cast<uint32_t>(a), n)) + buf;
        }
    });
    out.csv = finish_csv(cfg, notes, "p,n,index,monomial,log2_z,stderr\n", rows, out.partial);
    return out;
}

ExperimentOutput run_search(const ExperimentConfig& cfg) {
    validate(cfg);
    ExperimentOutput out;
    std::string notes, rows;
    out.partial = !Grid(cfg).for_each([&](double p, int n) {
        auto t = design_table(cfg, p, n);
        notes += table_line(cfg, t);
        auto s = cached_search(cfg, t);
        out.dimension_rows.push_back(dimension_row(p, s));
        rows += dimension_csv_row(cfg, out.dimension_rows.back());
        if (!cfg.out_dir.empty()) {
            std::filesystem::create_directories(cfg.out_dir);
            std::ofstream(std::filesystem::path(cfg.out_dir) /
                          (to_string(cfg.channel) + "_p" + num(p) + "_n" + std::to_string(n) + "_code.json"))
                << code_descriptor(s.code).dump() << '\n';
        }
    });
    out.csv = finish_csv(cfg, notes, kDimensionColumns, rows, out.partial);
    return out;
}

ExperimentOutput run_dimension_sweep(const ExperimentConfig& cfg) {
    validate(cfg);
    ExperimentOutput out;
    std::string notes, rows;
    out.partial = !Grid(cfg).for_each([&](double p, int n) {
        auto t = design_table(cfg, p, n);
        notes += table_line(cfg, t);
        out.dimension_rows.push_back(dimension_row(p, cached_search(cfg, t)));
        rows += dimension_csv_row(cfg, out.dimension_rows.back());
    });
    out.fits = fit_dimension_rows(cfg, out.dimension_rows);
    for (const auto& [p, f] : out.fits) {
        notes += "#! fit p=" + num(p) + " slope=" + num(f.slope) + " intercept=" + num(f.intercept) +
                 " r_squared=" + num(f.r_squared) + " points=" + std::to_string(f.points) + "\n";
    }
    out.csv = finish_csv(cfg, notes, kDimensionColumns, rows, out.partial);
    out.gnuplot = plot_script("dual rate dim C^perp / N vs block size", "N", "dim C^perp / N", true, true, 4, 7, cfg,
                              "sweep-dim.csv");
    return out;
}

ExperimentOutput run_error_sweep(const ExperimentConfig& cfg) {
    ExperimentOutput out = run_dimension_sweep(cfg);
    // Same grid and columns; the plot shows the threshold instead of the rate.
    out.fits.clear();
    std::string csv;
    std::istringstream in(out.csv);
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("#! fit", 0) == 0) continue;
        csv += line + '\n';
    }
    out.csv = csv;
    out.gnuplot = is_bec(cfg) ? plot_script("LLR log2((1-eps)/eps) vs block size", "N", "LLR", true, false, 4, 9, cfg,
                                            "sweep-err.csv")
                              : plot_script("Bhattacharyya threshold vs block size", "N", "-log2 eps", true, false, 4, 10,
                                            cfg, "sweep-err.csv");
    return out;
}

ExperimentOutput run_build_css(const ExperimentConfig& cfg) {
    validate(cfg);
    ExperimentOutput out;
    std::string notes, rows;
    PunctureRule rule = parse_puncture_rule(cfg.puncture);
    out.partial = !Grid(cfg).for_each([&](double p, int n) {
        auto t = design_table(cfg, p, n);
        notes += table_line(cfg, t);
        auto s = cached_search(cfg, t);
        size_t k = resolve_puncture_count(cfg.k_rule, s.report.dual_dim);
        auto code = build_css(s.code, k, rule);
        if (!cfg.out_dir.empty()) {
            std::filesystem::create_directories(cfg.out_dir);
            std::ofstream f(std::filesystem::path(cfg.out_dir) /
                                (to_string(cfg.channel) + "_p" + num(p) + "_n" + std::to_string(n) + ".ptc"),
                            std::ios::binary);
            write_code(code, f);
        }
        rows += to_string(cfg.channel) + ',' + num(p) + ',' + std::to_string(n) + ',' +
                std::to_string(code.source.length()) + ',' + std::to_string(code.block_len) + ',' +
                std::to_string(code.k) + ',' + std::to_string(s.report.dual_dim) + ',' +
                std::to_string(code.h0.rows()) + ',' + std::to_string(code.g.rows()) + ',' + hex64(code.digest()) + '\n';
    });
    out.csv = finish_csv(cfg, notes, "channel,p,n,N,block_len,k,dual_dim,h0_rows,g_rows,digest\n", rows, out.partial);
    return out;
}

ExperimentOutput run_simulation(const ExperimentConfig& cfg) {
    validate(cfg);
    ExperimentOutput out;
    std::string notes, rows;
    PunctureRule rule = parse_puncture_rule(cfg.puncture);
    out.partial = !Grid(cfg).for_each([&](double p, int n) {
        auto t = design_table(cfg, p, n);
        notes += table_line(cfg, t);
        auto s = cached_search(cfg, t);
        size_t k = resolve_puncture_count(cfg.k_rule, s.report.dual_dim);
        auto code = build_css(s.code, k, rule);
        ChannelSpec noise = is_bec(cfg) ? ChannelSpec::erasure(p) : ChannelSpec::binary_symmetric(p);
        SimulationRow row;
        row.p = p;
        row.n = n;
        row.N = code.source.length();
        row.k = code.k;
        row.q = static_cast<double>(code.k) / static_cast<double>(row.N);
        // Expected failures over the whole run, by the union bound; far below one means the
        // run would only ever report zero.
        double ub = code.source.union_bound_log2();
        row.simulated = p == 0.0 || ub + std::log2(static_cast<double>(cfg.trials)) > -10.0;
        if (row.simulated) {
            NoiseRun run = NoiseRun::for_code(code, noise, cfg.trials, cfg.seed);
            run.threads = cfg.threads;
            row.estimate = simulate(run);
        } else {
            row.estimate.union_bound_log2 = ub;
            row.estimate.logical_bits = code.k;
        }
        const auto& e = row.estimate;
        std::ostringstream line;
        line << n << ',' << row.N << ',' << row.k << ',' << num(p) << ',' << num(row.q) << ',' << e.trials << ','
             << num(e.bit_error.mean) << ',' << num(e.bit_error.lo) << ',' << num(e.bit_error.hi) << ','
             << num(e.word_error.mean) << ',' << num(e.union_bound_log2) << ',' << cfg.seed << ','
             << (row.simulated ? "simulated" : "not_simulated") << '\n';
        rows += line.str();
        out.simulation_rows.push_back(std::move(row));
    });
    out.csv = finish_csv(cfg, notes,
                         "n,N,k,p,q,trials,bit_error,ci_lo,ci_hi,word_error,union_bound_log2,seed,status\n", rows,
                         out.partial);
    std::ostringstream gp;
    gp << "set datafile separator ','\nset title 'SC decoder failure vs block size'\n"
       << "set xlabel 'N'\nset ylabel 'rate'\nset logscale x 2\nset logscale y 10\nset grid\n"
       << "plot 'simulate.csv' using 2:($7 > 0 ? $7 : 1/0):8:9 with yerrorbars title 'bit error', \\\n"
       << "     'simulate.csv' using 2:(2**$11) with linespoints title 'union bound'\n";
    out.gnuplot = gp.str();
    return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
    if (cfg.command == "reliability") return run_reliability(cfg);
    if (cfg.command == "search") return run_search(cfg);
    if (cfg.command == "build-css") return run_build_css(cfg);
    if (cfg.command == "sweep-dim") return run_dimension_sweep(cfg);
    if (cfg.command == "sweep-err") return run_error_sweep(cfg);
    if (cfg.command == "simulate") return run_simulation(cfg);
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

FitResult fit_csv(std::istream& in, const std::string& x_col, const std::string& y_col, std::optional<double> p_filter) {
    std::vector<std::string> header;
    std::vector<std::pair<double, double>> pts;
    long xi = -1, yi = -1, pi = -1;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        auto cells = split(line, ',');
        if (header.empty()) {
            header = cells;
            for (size_t i = 0; i < header.size(); ++i) {
                if (header[i] == x_col) xi = static_cast<long>(i);
                if (header[i] == y_col) yi = static_cast<long>(i);
                if (header[i] == "p") pi = static_cast<long>(i);
            }
            if (xi < 0 || yi < 0) throw std::invalid_argument("fit: column not found");
            if (p_filter && pi < 0) throw std::invalid_argument("fit: no p column to filter on");
            continue;
        }
        if (cells.size() != header.size()) throw std::invalid_argument("fit: ragged row");
        if (p_filter && std::stod(cells[pi]) != *p_filter) continue;
        pts.emplace_back(std::stod(cells[xi]), std::stod(cells[yi]));
    }
    return fit_loglog(pts);
}

}  // namespace polartri
