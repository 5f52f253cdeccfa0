#include "polartri/reliability.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "polartri/monomial.h"
#include "polartri/parallel.h"
#include "polartri/rng.h"
#include "polartri/sc_decoder.h"

namespace polartri {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInvLn2 = 1.4426950408889634;
// Trials are cut into this many fixed slots so the merge order never depends on scheduling.
constexpr size_t kSlots = 16;

void check_n(int n) {
    if (n < 0 || n > kMaxVars) throw std::out_of_range("block exponent must be in [0, 24]");
}

// log2(2z - z^2) from l = log2 z.
double log2_minus(double l) {
    if (l == kNegInf) return kNegInf;
    return std::min(0.0, l + 1.0 + std::log1p(-std::exp2(l - 1.0)) * kInvLn2);
}

}  // namespace

std::string to_string(ReliabilityMethod m) {
    switch (m) {
        case ReliabilityMethod::exact_bec: return "exact_bec";
        case ReliabilityMethod::monte_carlo_bsc: return "monte_carlo_bsc";
        case ReliabilityMethod::uniform: return "uniform";
    }
    return "unknown";
}

void Log2MeanAccumulator::add(double v) {
    ++count_;
    if (v == kNegInf) return;
    if (v > max_) {
        double r = std::exp2(max_ - v);
        s1_ *= r;
        s2_ *= r * r;
        max_ = v;
    }
    double x = std::exp2(v - max_);
    s1_ += x;
    s2_ += x * x;
}

void Log2MeanAccumulator::merge(const Log2MeanAccumulator& other) {
    count_ += other.count_;
    if (other.max_ == kNegInf) return;
    if (max_ == kNegInf) {
        max_ = other.max_;
        s1_ = other.s1_;
        s2_ = other.s2_;
        return;
    }
    double m = std::max(max_, other.max_);
    double ra = std::exp2(max_ - m), rb = std::exp2(other.max_ - m);
    s1_ = s1_ * ra + other.s1_ * rb;
    s2_ = s2_ * ra * ra + other.s2_ * rb * rb;
    max_ = m;
}

double Log2MeanAccumulator::log2_mean() const {
    if (count_ == 0 || max_ == kNegInf) return kNegInf;
    return max_ + std::log2(s1_ / static_cast<double>(count_));
}

double Log2MeanAccumulator::log2_stderr() const {
    if (count_ < 2 || max_ == kNegInf) return kNegInf;
    double t = static_cast<double>(count_);
    double var = (s2_ - s1_ * s1_ / t) / (t - 1.0);
    if (!(var > 0.0)) return kNegInf;
    return max_ + 0.5 * std::log2(var / t);
}

ReliabilityTable bec_reliabilities(double p, int n) {
    check_n(n);
    ReliabilityTable t;
    t.n = n;
    t.channel = ChannelSpec::erasure(p);
    t.method = ReliabilityMethod::exact_bec;
    std::vector<double> cur{p == 0.0 ? kNegInf : std::log2(p)};
    std::vector<double> next;
    for (int level = 0; level < n; ++level) {
        next.resize(cur.size() * 2);
        for (size_t i = 0; i < cur.size(); ++i) {
            next[2 * i] = log2_minus(cur[i]);
            next[2 * i + 1] = 2.0 * cur[i];
        }
        cur.swap(next);
    }
    t.log2_z = std::move(cur);
    return t;
}

ReliabilityTable mc_bsc_reliabilities(double p, int n, uint64_t samples, uint64_t seed, int threads) {
    check_n(n);
    if (samples == 0) throw std::invalid_argument("mc_bsc_reliabilities requires at least one sample");
    ReliabilityTable t;
    t.n = n;
    t.channel = ChannelSpec::binary_symmetric(p);
    t.method = ReliabilityMethod::monte_carlo_bsc;
    t.samples = samples;
    t.seed = seed;
    size_t N = size_t{1} << n;
    if (p == 0.0) {
        t.log2_z.assign(N, kNegInf);
        t.log2_stderr.assign(N, kNegInf);
        return t;
    }

    double mag = std::log2((1.0 - p) / p);
    std::vector<std::vector<Log2MeanAccumulator>> slots(kSlots, std::vector<Log2MeanAccumulator>(N));
    parallel_for(kSlots, threads, [&](size_t slot) {
        uint64_t begin = samples * slot / kSlots, end = samples * (slot + 1) / kSlots;
        ScDecoder dec(n);
        std::vector<double> y(N), lam(N);
        auto& acc = slots[slot];
        for (uint64_t trial = begin; trial < end; ++trial) {
            Rng rng(seed, trial);
            for (size_t i = 0; i < N; ++i) y[i] = rng.bernoulli(p) ? -mag : mag;
            dec.genie_llrs(y, lam);
            for (size_t a = 0; a < N; ++a) acc[a].add(-0.5 * lam[a]);
        }
    });
    t.log2_z.resize(N);
    t.log2_stderr.resize(N);
    for (size_t a = 0; a < N; ++a) {
        Log2MeanAccumulator total;
        for (auto& s : slots) total.merge(s[a]);
        // Clamped LLRs can push a sample slightly above 1 on the useless side; Z never exceeds 1.
        t.log2_z[a] = std::min(0.0, total.log2_mean());
        t.log2_stderr[a] = total.log2_stderr();
    }
    return t;
}

ReliabilityTable uniform_reliabilities(int n) {
    check_n(n);
    ReliabilityTable t;
    t.n = n;
    t.method = ReliabilityMethod::uniform;
    t.log2_z.assign(size_t{1} << n, -1.0);
    return t;
}

std::vector<uint32_t> reliability_order(const ReliabilityTable& table) {
    uint32_t N = static_cast<uint32_t>(table.size());
    uint32_t full = mask::full(table.n);
    // (degree, index sum) packed so that one integer compare breaks ties.
    std::vector<uint32_t> shape(N);
    for (uint32_t a = 0; a < N; ++a) {
        uint32_t m = ~a & full;
        uint32_t index_sum = 0;
        for (uint32_t r = m; r; r &= r - 1) index_sum += std::countr_zero(r);
        shape[a] = (static_cast<uint32_t>(std::popcount(m)) << 16) | index_sum;
    }
    std::vector<uint32_t> order(N);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](uint32_t x, uint32_t y) {
        if (table.log2_z[x] != table.log2_z[y]) return table.log2_z[x] < table.log2_z[y];
        if (shape[x] != shape[y]) return shape[x] < shape[y];
        return (~x & full) < (~y & full);
    });
    return order;
}

}  // namespace polartri
