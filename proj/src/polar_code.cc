#include "polartri/polar_code.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "polartri/digest.h"
#include "polartri/table_io.h"

namespace polartri {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Bits i with (i & half) == 0, for half < 64.
constexpr uint64_t kLowHalfMask[6] = {0x5555555555555555ull, 0x3333333333333333ull, 0x0F0F0F0F0F0F0F0Full,
                                      0x00FF00FF00FF00FFull, 0x0000FFFF0000FFFFull, 0x00000000FFFFFFFFull};

void check_power_of_two(size_t len) {
    if (len == 0 || !std::has_single_bit(len)) throw std::invalid_argument("encode: length must be a power of two");
}

}  // namespace

BitVector encode(const BitVector& u) {
    check_power_of_two(u.size());
    BitVector x = u;
    auto w = x.words();
    size_t N = u.size();
    for (int s = 0; s < 6 && (size_t{1} << s) < N; ++s) {
        int half = 1 << s;
        for (uint64_t& word : w) word ^= (word >> half) & kLowHalfMask[s];
    }
    for (size_t half = 64; half < N; half <<= 1) {
        size_t hw = half / 64;
        for (size_t i = 0; i < w.size(); i += 2 * hw) {
            for (size_t j = 0; j < hw; ++j) w[i + j] ^= w[i + j + hw];
        }
    }
    return x;
}

void encode_in_place(std::span<uint8_t> x) {
    check_power_of_two(x.size());
    size_t N = x.size();
    for (size_t half = 1; half < N; half <<= 1) {
        for (size_t i = 0; i < N; i += 2 * half) {
            for (size_t j = 0; j < half; ++j) x[i + j] ^= x[i + j + half];
        }
    }
}

double PolarCode::union_bound_log2() const {
    if (info_log2_z.empty()) return kNegInf;
    double m = *std::max_element(info_log2_z.begin(), info_log2_z.end());
    if (m == kNegInf) return kNegInf;
    double s = 0.0;
    for (double v : info_log2_z) s += std::exp2(v - m);
    return m + std::log2(s);
}

PolarCode code_from_info_set(const ReliabilityTable& table, MonomialSet info_set) {
    if (info_set.num_vars() != table.n) throw std::invalid_argument("info set and table disagree on n");
    PolarCode code;
    code.n = table.n;
    code.info_set = require_decreasing(std::move(info_set));
    code.is_info.assign(code.length(), 0);
    uint32_t full = mask::full(table.n);
    for (uint32_t m : code.info_set.masks()) code.is_info[~m & full] = 1;
    code.threshold_log2_eps = kNegInf;
    for (uint32_t a = 0; a < code.length(); ++a) {
        if (!code.is_info[a]) continue;
        code.info_indices.push_back(a);
        code.info_log2_z.push_back(table.log2_z[a]);
        code.threshold_log2_eps = std::max(code.threshold_log2_eps, table.log2_z[a]);
    }
    code.table_ref = table_reference(table);
    return code;
}

MonomialSet prefix_closure(const std::vector<uint32_t>& order, size_t prefix, int n) {
    uint32_t full = mask::full(n);
    std::vector<uint32_t> masks;
    masks.reserve(prefix);
    for (size_t i = 0; i < prefix; ++i) masks.push_back(~order[i] & full);
    return decreasing_closure(MonomialSet(n, std::move(masks)));
}

PolarCode construct_code(const ReliabilityTable& table, CodeTarget target) {
    size_t N = table.size();
    auto order = reliability_order(table);
    size_t K = 0;
    switch (target.kind) {
        case CodeTarget::Kind::dimension:
            if (target.value < 0 || target.value > static_cast<double>(N)) {
                throw std::invalid_argument("construct_code: dimension outside [0, 2^n]");
            }
            K = static_cast<size_t>(target.value);
            break;
        case CodeTarget::Kind::rate:
            if (!(target.value >= 0.0 && target.value <= 1.0)) throw std::invalid_argument("construct_code: rate outside [0, 1]");
            K = static_cast<size_t>(std::llround(target.value * static_cast<double>(N)));
            break;
        case CodeTarget::Kind::threshold_log2:
            while (K < N && table.log2_z[order[K]] <= target.value) ++K;
            break;
    }

    MonomialSet closed = prefix_closure(order, K, table.n);
    if (closed.size() == K) return code_from_info_set(table, std::move(closed));

    // Trim: remove maximal members, worst design value first, later order position on ties.
    int n = table.n;
    uint32_t full = mask::full(n);
    std::vector<uint32_t> rank(N);
    for (size_t i = 0; i < N; ++i) rank[order[i]] = static_cast<uint32_t>(i);
    std::vector<uint8_t> member(N, 0);
    for (uint32_t m : closed.masks()) member[m] = 1;
    auto maximal = [&](uint32_t m) {
        bool top = true;
        mask::for_each_up_cover(m, n, [&](uint32_t up) { top = top && !member[up]; });
        return top;
    };
    // Priority by channel rank: the order already sorts by design value with ties resolved.
    std::priority_queue<uint32_t> heap;  // holds ranks
    for (uint32_t m : closed.masks()) {
        if (maximal(m)) heap.push(rank[~m & full]);
    }
    size_t size = closed.size();
    while (size > K) {
        uint32_t r = heap.top();
        heap.pop();
        uint32_t m = ~order[r] & full;
        if (!member[m] || !maximal(m)) continue;
        member[m] = 0;
        --size;
        mask::for_each_down_cover(m, n, [&](uint32_t down) {
            if (member[down] && maximal(down)) heap.push(rank[~down & full]);
        });
    }
    std::vector<uint32_t> masks;
    for (uint32_t m = 0; m < N; ++m) {
        if (member[m]) masks.push_back(m);
    }
    return code_from_info_set(table, MonomialSet(n, std::move(masks)));
}

ErasureDecodeResult sc_decode_erasure(std::span<const Ternary> y, const PolarCode& code) {
    if (y.size() != code.length()) throw std::invalid_argument("sc_decode_erasure: length mismatch");
    ScDecoder dec(code.n);
    std::vector<uint8_t> u(code.length());
    ErasureDecodeResult res;
    dec.decode_erasure(y, code.is_info, u, res.undecided);
    res.u_hat = BitVector(code.length());
    for (size_t i = 0; i < u.size(); ++i) res.u_hat.set(i, u[i]);
    return res;
}

BitVector sc_decode_llr(std::span<const double> llr, const PolarCode& code, CheckNodeRule rule) {
    if (llr.size() != code.length()) throw std::invalid_argument("sc_decode_llr: length mismatch");
    ScDecoder dec(code.n);
    std::vector<uint8_t> u(code.length());
    dec.decode_llr(llr, code.is_info, u, rule);
    BitVector out(code.length());
    for (size_t i = 0; i < u.size(); ++i) out.set(i, u[i]);
    return out;
}

std::string table_reference(const ReliabilityTable& table) {
    std::ostringstream out;
    out << to_string(table.method);
    if (table.channel) out << ' ' << to_string(*table.channel);
    out << " n=" << table.n;
    if (table.method == ReliabilityMethod::monte_carlo_bsc) out << " samples=" << table.samples << " seed=" << table.seed;
    out << " digest=" << hex64(table_digest(table));
    return out.str();
}

nlohmann::json monomial_set_to_json(const MonomialSet& s) {
    return {{"n", s.num_vars()}, {"masks", std::vector<uint32_t>(s.masks().begin(), s.masks().end())}};
}

MonomialSet monomial_set_from_json(const nlohmann::json& j) {
    return MonomialSet(j.at("n").get<int>(), j.at("masks").get<std::vector<uint32_t>>());
}

nlohmann::json code_descriptor(const PolarCode& code) {
    nlohmann::json j;
    j["n"] = code.n;
    j["info_set"] = monomial_set_to_json(code.info_set);
    // JSON has no infinities; a noiseless design threshold is written as null.
    if (std::isfinite(code.threshold_log2_eps)) {
        j["threshold_log2_eps"] = code.threshold_log2_eps;
    } else {
        j["threshold_log2_eps"] = nullptr;
    }
    j["table_ref"] = code.table_ref;
    return j;
}

}  // namespace polartri
