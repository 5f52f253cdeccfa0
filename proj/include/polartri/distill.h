#pragma once

#include <cstdint>
#include <vector>

#include "polartri/channel.h"
#include "polartri/polar_code.h"
#include "polartri/triortho.h"

namespace polartri {

// Noise seen by the decoder once a fraction q of positions is punctured (erased):
// erasure noise composes to BEC(p + q - pq); dephasing noise as BSC(p) composes with the
// BSC(q/2) degradation of the puncture erasures to BSC(p + q/2 - pq).
ChannelSpec effective_channel(const ChannelSpec& noise, double puncture_rate);

struct NoiseRun {
    const PolarCode* code = nullptr;
    std::vector<uint32_t> punctures;  // erased in every trial; these carry the logical bits
    ChannelSpec noise = ChannelSpec::erasure(0.0);
    uint64_t trials = 10000;
    uint64_t seed = 0;
    uint64_t stop_after_failures = 100;  // 0 disables early stopping
    CheckNodeRule rule = CheckNodeRule::exact;
    int threads = 0;

    static NoiseRun for_code(const TriorthogonalCode& c, ChannelSpec noise, uint64_t trials, uint64_t seed);
};

struct RateInterval {
    double mean = 0.0, lo = 0.0, hi = 0.0;
    friend bool operator==(const RateInterval&, const RateInterval&) = default;
};

// Wilson score interval at the given normal quantile (1.959964 for 95%).
RateInterval wilson_interval(uint64_t successes, uint64_t total, double z = 1.959964);

struct ErrorRateEstimate {
    RateInterval bit_error;   // per logical bit
    RateInterval word_error;  // any logical bit wrong or undetermined
    double undecided_rate = 0.0;  // erasure mode: undecided information bits per information bit
    uint64_t trials = 0;          // trials actually run (early stopping may cut the request)
    uint64_t bit_failures = 0;
    uint64_t word_failures = 0;
    size_t logical_bits = 0;
    double union_bound_log2 = 0.0;
    std::vector<uint64_t> channel_failures;  // aligned with code->info_indices

    friend bool operator==(const ErrorRateEstimate&, const ErrorRateEstimate&) = default;
};

// All-zero transmission over the noise with the punctured positions erased, followed by SC
// decoding of the source polar code. Logical bit j (a punctured coordinate) fails when the
// decoder leaves it undetermined or re-encodes it wrong; x_j depends on the u_a with a
// containing j. Without punctures the information bits themselves are the logical bits.
// Trials run in fixed blocks merged in order, so results do not depend on the thread count.
ErrorRateEstimate simulate(const NoiseRun& run);

// log2((1 - eps) / eps) from the code threshold; +inf for eps = 0.
double llr_figure_point(const PolarCode& code);

}  // namespace polartri
