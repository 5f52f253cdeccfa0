#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace polartri {

// LLRs are base 2: log2(W(y|0) / W(y|1)). Magnitudes are capped here so that saturated
// beliefs stay finite and ordered.
inline constexpr double kLlrClamp = 4096.0;

enum class CheckNodeRule { exact, min_sum };

// Exact check-node combination 2 atanh(tanh(a/2) tanh(b/2)) in base-2 units.
double check_node_exact(double a, double b);
double check_node_min_sum(double a, double b);

enum class Ternary : uint8_t { zero = 0, one = 1, erased = 2 };

// Successive cancellation over the natural-order transform x = F^{(x)n} u with
// F = [[1,1],[0,1]]. The first half of u is decoded from the sum of the two halves of the
// received word (the minus channel), the second half from both halves given the first.
// Holds per-stage belief and partial-sum buffers; one instance per thread.
class ScDecoder {
   public:
    explicit ScDecoder(int n);

    int n() const { return n_; }
    size_t length() const { return size_t{1} << n_; }

    // Genie-aided pass for the all-zero message: out[a] is the synthetic-channel LLR of bit a
    // given the true (zero) values of all earlier bits.
    void genie_llrs(std::span<const double> channel_llr, std::span<double> out);

    // Ternary message passing. is_info[a] != 0 marks information positions; frozen bits are 0.
    // Information bits left erased are reported in `undecided` and continue as 0.
    void decode_erasure(std::span<const Ternary> y, std::span<const uint8_t> is_info, std::span<uint8_t> u_hat,
                        std::vector<uint32_t>& undecided);

    // Ternary erasure flags per bit (1 = the synthetic channel was erased) for the all-zero
    // message; same pass as decode_erasure without the decision bookkeeping.
    void genie_erasures(std::span<const Ternary> y, std::span<uint8_t> erased);

    void decode_llr(std::span<const double> llr, std::span<const uint8_t> is_info, std::span<uint8_t> u_hat,
                    CheckNodeRule rule = CheckNodeRule::exact);

   private:
    template <typename Leaf>
    void run_llr(int level, uint32_t offset, CheckNodeRule rule, Leaf& leaf);
    template <typename Leaf>
    void run_ternary(int level, uint32_t offset, Leaf& leaf);

    int n_;
    std::vector<std::vector<double>> alpha_;
    std::vector<std::vector<uint8_t>> talpha_;
    std::vector<std::vector<uint8_t>> beta_;
};

}  // namespace polartri
