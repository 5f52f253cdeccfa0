#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "polartri/channel.h"

namespace polartri {

enum class ReliabilityMethod : uint32_t { exact_bec = 0, monte_carlo_bsc = 1, uniform = 2 };

std::string to_string(ReliabilityMethod m);

// Per-synthetic-channel Bhattacharyya parameters, log2 domain, indexed by channel index a.
struct ReliabilityTable {
    int n = 0;
    std::optional<ChannelSpec> channel;  // empty for the uniform table
    ReliabilityMethod method = ReliabilityMethod::exact_bec;
    uint64_t samples = 0;
    uint64_t seed = 0;
    std::vector<double> log2_z;
    std::vector<double> log2_stderr;  // Monte Carlo only, same length as log2_z

    size_t size() const { return log2_z.size(); }
    friend bool operator==(const ReliabilityTable&, const ReliabilityTable&) = default;
};

// Exact erasure-channel values: z- = 2z - z^2, z+ = z^2, most significant index bit first.
ReliabilityTable bec_reliabilities(double p, int n);

// Genie-aided Monte Carlo for BSC(p): mean of 2^(-lambda_a / 2) over all-zero transmissions.
// The result depends only on (p, n, samples, seed), not on the thread count.
ReliabilityTable mc_bsc_reliabilities(double p, int n, uint64_t samples, uint64_t seed, int threads = 0);

// All channels equally reliable; the order then falls back to the monomial tie-break, which
// yields Reed-Muller prefixes.
ReliabilityTable uniform_reliabilities(int n);

// Channel indices, most reliable first. Ties go to the monomial with smaller degree, then
// smaller index sum, then smaller mask; this refines the strong order.
std::vector<uint32_t> reliability_order(const ReliabilityTable& table);

// Log-sum-exp accumulator for means of 2^v.
class Log2MeanAccumulator {
   public:
    void add(double v);
    void merge(const Log2MeanAccumulator& other);
    uint64_t count() const { return count_; }
    double log2_mean() const;
    // log2 of the standard error of the mean; -inf when fewer than two samples or no spread.
    double log2_stderr() const;

   private:
    double max_ = -std::numeric_limits<double>::infinity();
    double s1_ = 0.0;  // sum 2^(v - max)
    double s2_ = 0.0;  // sum 2^(2 (v - max))
    uint64_t count_ = 0;
};

}  // namespace polartri
