#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "polartri/bits.h"
#include "polartri/monomial.h"
#include "polartri/reliability.h"
#include "polartri/sc_decoder.h"

namespace polartri {

// x = F^{(x)n} u with F = [[1,1],[0,1]], natural index order. Self-inverse.
BitVector encode(const BitVector& u);
void encode_in_place(std::span<uint8_t> bits);

struct PolarCode {
    int n = 0;
    MonomialSet info_set{0};              // decreasing
    double threshold_log2_eps = 0.0;      // max design log2 Z over information channels
    std::vector<uint32_t> info_indices;   // ascending channel indices
    std::vector<double> info_log2_z;      // design log2 Z, aligned with info_indices
    std::vector<uint8_t> is_info;         // by channel index
    std::string table_ref;

    size_t length() const { return size_t{1} << n; }
    size_t dimension() const { return info_indices.size(); }
    // log2 of the sum of design Z over the information channels.
    double union_bound_log2() const;
};

// Wraps a decreasing monomial set as a code, reading design values from `table`.
PolarCode code_from_info_set(const ReliabilityTable& table, MonomialSet info_set);

struct CodeTarget {
    enum class Kind { rate, threshold_log2, dimension };
    Kind kind;
    double value;

    static CodeTarget rate(double r) { return {Kind::rate, r}; }
    static CodeTarget threshold_log2(double log2_eps) { return {Kind::threshold_log2, log2_eps}; }
    static CodeTarget dimension(size_t k) { return {Kind::dimension, static_cast<double>(k)}; }
};

// Takes channels in reliability order up to the target, closes the selection under the
// strong order, then drops the worst maximal members until the size matches again.
PolarCode construct_code(const ReliabilityTable& table, CodeTarget target);

// Down-closure of the first `prefix` channels of `order`, as monomials.
MonomialSet prefix_closure(const std::vector<uint32_t>& order, size_t prefix, int n);

struct ErasureDecodeResult {
    BitVector u_hat;
    std::vector<uint32_t> undecided;
};
ErasureDecodeResult sc_decode_erasure(std::span<const Ternary> y, const PolarCode& code);
BitVector sc_decode_llr(std::span<const double> llr, const PolarCode& code, CheckNodeRule rule = CheckNodeRule::exact);

// Short provenance string for a table: method, channel, n, samples, seed and digest.
std::string table_reference(const ReliabilityTable& table);

nlohmann::json monomial_set_to_json(const MonomialSet& s);
MonomialSet monomial_set_from_json(const nlohmann::json& j);
nlohmann::json code_descriptor(const PolarCode& code);

}  // namespace polartri
