#include "polartri/distill.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "polartri/parallel.h"
#include "polartri/rng.h"
#include "polartri/sc_decoder.h"

namespace polartri {

namespace {

constexpr uint64_t kBlockTrials = 256;
constexpr size_t kBlocksPerWave = 16;

struct BlockStats {
    uint64_t trials = 0, bit_failures = 0, word_failures = 0, undecided = 0;
    std::vector<uint64_t> channel_failures;
};

}  // namespace

ChannelSpec effective_channel(const ChannelSpec& noise, double q) {
    if (noise.is_erasure()) return ChannelSpec::erasure(compose_erasure(noise.p(), q));
    return ChannelSpec::binary_symmetric(compose_bsc(noise.p(), degrade_erasure_to_bsc(q).p()));
}

NoiseRun NoiseRun::for_code(const TriorthogonalCode& c, ChannelSpec noise, uint64_t trials, uint64_t seed) {
    NoiseRun run;
    run.code = &c.source;
    run.punctures = c.punctures;
    run.noise = noise;
    run.trials = trials;
    run.seed = seed;
    return run;
}

RateInterval wilson_interval(uint64_t successes, uint64_t total, double z) {
    if (total == 0) return {0.0, 0.0, 1.0};
    double n = static_cast<double>(total);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

ErrorRateEstimate simulate(const NoiseRun& run) {
    if (!run.code) throw std::invalid_argument("simulate: no code");
    if (run.trials == 0) throw std::invalid_argument("simulate: zero trials");
    const PolarCode& code = *run.code;
    size_t N = code.length();
    for (uint32_t j : run.punctures) {
        if (j >= N) throw std::invalid_argument("simulate: puncture beyond block length");
    }
    const bool erasure = run.noise.is_erasure();
    const double p = run.noise.p();
    const double mag = p == 0.0 ? kLlrClamp : std::min(kLlrClamp, std::log2((1.0 - p) / p));
    std::vector<uint8_t> punctured(N, 0);
    for (uint32_t j : run.punctures) punctured[j] = 1;
    const size_t K = code.dimension();
    std::vector<uint32_t> info_pos(N, 0);
    for (size_t i = 0; i < K; ++i) info_pos[code.info_indices[i]] = static_cast<uint32_t>(i);
    const size_t logical = run.punctures.empty() ? K : run.punctures.size();

    auto run_block = [&](uint64_t block, BlockStats& st) {
        uint64_t begin = block * kBlockTrials, end = std::min(run.trials, begin + kBlockTrials);
        st = BlockStats{};
        st.channel_failures.assign(K, 0);
        ScDecoder dec(code.n);
        std::vector<Ternary> y(N);
        std::vector<double> llr(N);
        std::vector<uint8_t> u(N);
        std::vector<uint32_t> undecided;
        std::vector<uint8_t> failed(K);
        for (uint64_t t = begin; t < end; ++t) {
            Rng rng(run.seed, t);
            std::fill(failed.begin(), failed.end(), 0);
            if (erasure) {
                for (size_t i = 0; i < N; ++i) {
                    bool lost = rng.bernoulli(p);
                    y[i] = (lost || punctured[i]) ? Ternary::erased : Ternary::zero;
                }
                dec.decode_erasure(y, code.is_info, u, undecided);
                for (uint32_t a : undecided) failed[info_pos[a]] = 1;
                st.undecided += undecided.size();
            } else {
                for (size_t i = 0; i < N; ++i) {
                    bool flip = rng.bernoulli(p);
                    llr[i] = punctured[i] ? 0.0 : (flip ? -mag : mag);
                }
                dec.decode_llr(llr, code.is_info, u, run.rule);
                for (size_t i = 0; i < K; ++i) failed[i] = u[code.info_indices[i]];
            }
            uint64_t bits = 0;
            for (size_t i = 0; i < K; ++i) st.channel_failures[i] += failed[i];
            if (run.punctures.empty()) {
                for (size_t i = 0; i < K; ++i) bits += failed[i];
            } else if (erasure) {
                // x_j is unknown as soon as one undecided u_a has a containing j.
                for (uint32_t j : run.punctures) {
                    for (uint32_t a : undecided) {
                        if ((j & ~a) == 0) {
                            ++bits;
                            break;
                        }
                    }
                }
            } else {
                encode_in_place(u);
                for (uint32_t j : run.punctures) bits += u[j];
            }
            ++st.trials;
            st.bit_failures += bits;
            st.word_failures += bits > 0;
        }
    };

    ErrorRateEstimate est;
    est.channel_failures.assign(K, 0);
    est.logical_bits = logical;
    est.union_bound_log2 = code.union_bound_log2();
    uint64_t blocks = (run.trials + kBlockTrials - 1) / kBlockTrials;
    uint64_t undecided = 0;
    std::vector<BlockStats> wave(kBlocksPerWave);
    bool stop = false;
    for (uint64_t first = 0; first < blocks && !stop; first += kBlocksPerWave) {
        size_t count = static_cast<size_t>(std::min<uint64_t>(kBlocksPerWave, blocks - first));
        parallel_for(count, run.threads, [&](size_t i) { run_block(first + i, wave[i]); });
        for (size_t i = 0; i < count; ++i) {
            const auto& st = wave[i];
            est.trials += st.trials;
            est.bit_failures += st.bit_failures;
            est.word_failures += st.word_failures;
            undecided += st.undecided;
            for (size_t c = 0; c < K; ++c) est.channel_failures[c] += st.channel_failures[c];
            if (run.stop_after_failures && est.word_failures >= run.stop_after_failures) {
                stop = true;
                break;
            }
        }
    }
    est.bit_error = wilson_interval(est.bit_failures, est.trials * logical);
    est.word_error = wilson_interval(est.word_failures, est.trials);
    est.undecided_rate = K ? static_cast<double>(undecided) / static_cast<double>(est.trials * K) : 0.0;
    return est;
}

double llr_figure_point(const PolarCode& code) {
    double l = code.threshold_log2_eps;
    if (l == -std::numeric_limits<double>::infinity()) return std::numeric_limits<double>::infinity();
    if (!(l < 0.0)) throw std::domain_error("llr_figure_point requires a threshold below 1");
    return std::log1p(-std::exp2(l)) / std::log(2.0) - l;
}

}  // namespace polartri
