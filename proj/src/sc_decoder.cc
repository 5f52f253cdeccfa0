#include "polartri/sc_decoder.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace polartri {

namespace {

constexpr double kInvLn2 = 1.4426950408889634;

inline double clamp_llr(double v) { return std::clamp(v, -kLlrClamp, kLlrClamp); }

// log2(1 + 2^-x) for x >= 0; below double resolution past x = 64.
// Beliefs on discrete channels repeat a small set of values, so results are memoized in a
// direct-mapped table keyed by the exact bit pattern of x.
struct SoftplusMemo {
    static constexpr size_t kSize = 4096;
    uint64_t key[kSize];
    double value[kSize];
    SoftplusMemo() {
        for (size_t i = 0; i < kSize; ++i) key[i] = ~uint64_t{0};  // a NaN pattern, never looked up
    }
};

inline double softplus2_neg(double x) {
    if (x >= 64.0) return 0.0;
    static thread_local SoftplusMemo memo;
    uint64_t bits = std::bit_cast<uint64_t>(x);
    size_t slot = static_cast<size_t>((bits * 0x9E3779B97F4A7C15ull) >> 52);
    if (memo.key[slot] == bits) return memo.value[slot];
    double v = std::log1p(std::exp2(-x)) * kInvLn2;
    memo.key[slot] = bits;
    memo.value[slot] = v;
    return v;
}

inline uint8_t ternary_minus(uint8_t a, uint8_t b) {
    return (a == 2 || b == 2) ? uint8_t{2} : static_cast<uint8_t>(a ^ b);
}

inline uint8_t ternary_plus(uint8_t a, uint8_t b, uint8_t partial) {
    if (b != 2) return b;
    return a == 2 ? uint8_t{2} : static_cast<uint8_t>(a ^ partial);
}

}  // namespace

double check_node_exact(double a, double b) {
    double mag = std::min(std::fabs(a), std::fabs(b));
    double sign = (std::signbit(a) != std::signbit(b)) ? -1.0 : 1.0;
    double corr = softplus2_neg(std::fabs(a + b)) - softplus2_neg(std::fabs(a - b));
    return sign * mag + corr;
}

double check_node_min_sum(double a, double b) {
    double mag = std::min(std::fabs(a), std::fabs(b));
    return (std::signbit(a) != std::signbit(b)) ? -mag : mag;
}

ScDecoder::ScDecoder(int n) : n_(n) {
    if (n < 0 || n > 24) throw std::out_of_range("block exponent must be in [0, 24]");
    alpha_.resize(n + 1);
    talpha_.resize(n + 1);
    beta_.resize(n + 1);
    for (int level = 0; level <= n; ++level) {
        alpha_[level].assign(size_t{1} << level, 0.0);
        talpha_[level].assign(size_t{1} << level, 0);
        beta_[level].assign(size_t{1} << level, 0);
    }
}

template <typename Leaf>
void ScDecoder::run_llr(int level, uint32_t offset, CheckNodeRule rule, Leaf& leaf) {
    if (level == 0) {
        beta_[0][0] = leaf(offset, alpha_[0][0]);
        return;
    }
    size_t half = size_t{1} << (level - 1);
    const double* in = alpha_[level].data();
    double* child = alpha_[level - 1].data();
    if (rule == CheckNodeRule::exact) {
        for (size_t j = 0; j < half; ++j) child[j] = clamp_llr(check_node_exact(in[j], in[j + half]));
    } else {
        for (size_t j = 0; j < half; ++j) child[j] = check_node_min_sum(in[j], in[j + half]);
    }
    run_llr(level - 1, offset, rule, leaf);

    uint8_t* partial = beta_[level].data();
    const uint8_t* sub = beta_[level - 1].data();
    std::copy(sub, sub + half, partial);
    for (size_t j = 0; j < half; ++j) child[j] = clamp_llr(in[j + half] + (partial[j] ? -in[j] : in[j]));
    run_llr(level - 1, offset + static_cast<uint32_t>(half), rule, leaf);

    for (size_t j = 0; j < half; ++j) {
        partial[j] ^= sub[j];
        partial[j + half] = sub[j];
    }
}

template <typename Leaf>
void ScDecoder::run_ternary(int level, uint32_t offset, Leaf& leaf) {
    if (level == 0) {
        beta_[0][0] = leaf(offset, talpha_[0][0]);
        return;
    }
    size_t half = size_t{1} << (level - 1);
    const uint8_t* in = talpha_[level].data();
    uint8_t* child = talpha_[level - 1].data();
    for (size_t j = 0; j < half; ++j) child[j] = ternary_minus(in[j], in[j + half]);
    run_ternary(level - 1, offset, leaf);

    uint8_t* partial = beta_[level].data();
    const uint8_t* sub = beta_[level - 1].data();
    std::copy(sub, sub + half, partial);
    for (size_t j = 0; j < half; ++j) child[j] = ternary_plus(in[j], in[j + half], partial[j]);
    run_ternary(level - 1, offset + static_cast<uint32_t>(half), leaf);

    for (size_t j = 0; j < half; ++j) {
        partial[j] ^= sub[j];
        partial[j + half] = sub[j];
    }
}

void ScDecoder::genie_llrs(std::span<const double> channel_llr, std::span<double> out) {
    if (channel_llr.size() != length() || out.size() != length()) throw std::invalid_argument("genie_llrs: length mismatch");
    auto& top = alpha_[n_];
    for (size_t i = 0; i < top.size(); ++i) top[i] = clamp_llr(channel_llr[i]);
    auto leaf = [&](uint32_t a, double llr) -> uint8_t {
        out[a] = llr;
        return 0;
    };
    run_llr(n_, 0, CheckNodeRule::exact, leaf);
}

void ScDecoder::decode_erasure(std::span<const Ternary> y, std::span<const uint8_t> is_info, std::span<uint8_t> u_hat,
                               std::vector<uint32_t>& undecided) {
    if (y.size() != length() || is_info.size() != length() || u_hat.size() != length()) {
        throw std::invalid_argument("decode_erasure: length mismatch");
    }
    auto& top = talpha_[n_];
    for (size_t i = 0; i < top.size(); ++i) top[i] = static_cast<uint8_t>(y[i]);
    undecided.clear();
    auto leaf = [&](uint32_t a, uint8_t belief) -> uint8_t {
        uint8_t bit = 0;
        if (is_info[a]) {
            if (belief == 2) {
                undecided.push_back(a);
            } else {
                bit = belief;
            }
        }
        u_hat[a] = bit;
        return bit;
    };
    run_ternary(n_, 0, leaf);
}

void ScDecoder::genie_erasures(std::span<const Ternary> y, std::span<uint8_t> erased) {
    if (y.size() != length() || erased.size() != length()) throw std::invalid_argument("genie_erasures: length mismatch");
    auto& top = talpha_[n_];
    for (size_t i = 0; i < top.size(); ++i) top[i] = static_cast<uint8_t>(y[i]);
    auto leaf = [&](uint32_t a, uint8_t belief) -> uint8_t {
        erased[a] = belief == 2;
        return 0;
    };
    run_ternary(n_, 0, leaf);
}

void ScDecoder::decode_llr(std::span<const double> llr, std::span<const uint8_t> is_info, std::span<uint8_t> u_hat,
                           CheckNodeRule rule) {
    if (llr.size() != length() || is_info.size() != length() || u_hat.size() != length()) {
        throw std::invalid_argument("decode_llr: length mismatch");
    }
    auto& top = alpha_[n_];
    for (size_t i = 0; i < top.size(); ++i) {
        if (std::isnan(llr[i])) throw std::invalid_argument("decode_llr: NaN channel LLR");
        top[i] = clamp_llr(llr[i]);
    }
    auto leaf = [&](uint32_t a, double belief) -> uint8_t {
        uint8_t bit = (is_info[a] && belief < 0.0) ? 1 : 0;
        u_hat[a] = bit;
        return bit;
    };
    run_llr(n_, 0, rule, leaf);
}

}  // namespace polartri
