#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polartri/bits.h"

namespace polartri {

inline constexpr int kMaxVars = 24;

// A monomial x_0^{a_0} ... x_{n-1}^{a_{n-1}} of the ring F_2[x_0..x_{n-1}]/(x_i^2 - x_i).
// Bit t of exponents() is a_t.
class Monomial {
   public:
    Monomial(uint32_t exponents, int num_vars);

    static Monomial one(int num_vars) { return Monomial(0, num_vars); }
    static Monomial full(int num_vars);

    uint32_t exponents() const { return mask_; }
    int num_vars() const { return n_; }
    int degree() const;
    bool has(int var) const { return (mask_ >> var) & 1; }
    std::vector<int> variables() const;  // ascending

    friend bool operator==(const Monomial&, const Monomial&) = default;

   private:
    uint32_t mask_;
    int n_;
};

std::string to_string(const Monomial& m);  // "1", "x0x2", ...

// Synthetic channel index a <-> monomial. The exponent of x_t is 1 - (bit t of a), so
// index 2^n - 1 (the all-plus channel) is the monomial 1.
Monomial monomial_from_channel_index(uint32_t a, int num_vars);
uint32_t channel_index_of(const Monomial& m);

// Strong order f <= g. Equal degree: sorted variable indices compared pointwise.
// deg f < deg g: some degree-deg(f) divisor of g dominates f.
bool strong_leq(const Monomial& f, const Monomial& g);
// Divisibility order.
bool weak_leq(const Monomial& f, const Monomial& g);
Monomial complement(const Monomial& m);
Monomial product(const Monomial& f, const Monomial& g);
// Evaluation vector of length 2^n; coordinate u = sum_t u_t 2^t holds m(u).
BitVector evaluate(const Monomial& m);

namespace mask {

// Mask-level versions used on hot paths; no validation.
bool strong_leq(uint32_t f, uint32_t g);
inline bool weak_leq(uint32_t f, uint32_t g) { return (f & ~g) == 0; }
inline uint32_t full(int n) { return n == 32 ? ~uint32_t{0} : (uint32_t{1} << n) - 1; }

// Immediate successors / predecessors in the strong order: multiply by a missing variable,
// or shift a variable x_j to x_{j+1}. These generate the order.
template <typename F>
void for_each_up_cover(uint32_t f, int n, F&& fn) {
    for (int j = 0; j < n; ++j) {
        uint32_t bit = uint32_t{1} << j;
        if (!(f & bit)) {
            fn(f | bit);
        } else if (j + 1 < n && !(f & (bit << 1))) {
            fn(f ^ bit ^ (bit << 1));
        }
    }
}

template <typename F>
void for_each_down_cover(uint32_t f, int n, F&& fn) {
    for (int j = 0; j < n; ++j) {
        uint32_t bit = uint32_t{1} << j;
        if (f & bit) {
            fn(f ^ bit);
            if (j > 0 && !(f & (bit >> 1))) fn(f ^ bit ^ (bit >> 1));
        }
    }
}

}  // namespace mask

// A set of monomials in a fixed number of variables, stored as sorted exponent masks plus a
// membership bitset. Immutable after construction.
class MonomialSet {
   public:
    explicit MonomialSet(int num_vars);
    MonomialSet(int num_vars, std::vector<uint32_t> masks);
    MonomialSet(int num_vars, const std::vector<Monomial>& members);

    static MonomialSet all(int num_vars);
    // Builds from a membership predicate table of size 2^n.
    static MonomialSet from_membership(int num_vars, std::vector<uint64_t> bitset, bool decreasing);

    int num_vars() const { return n_; }
    size_t size() const { return masks_.size(); }
    bool empty() const { return masks_.empty(); }
    bool contains(uint32_t m) const { return (bits_[m >> 6] >> (m & 63)) & 1; }
    bool contains(const Monomial& m) const;
    std::span<const uint32_t> masks() const { return masks_; }
    std::span<const uint64_t> membership() const { return bits_; }
    std::vector<Monomial> members() const;

    // Set by operations whose result is decreasing by construction, or by require_decreasing().
    bool decreasing_verified() const { return decreasing_; }

    friend bool operator==(const MonomialSet& a, const MonomialSet& b) {
        return a.n_ == b.n_ && a.masks_ == b.masks_;
    }

   private:
    friend MonomialSet require_decreasing(MonomialSet s);

    int n_;
    std::vector<uint32_t> masks_;
    std::vector<uint64_t> bits_;
    bool decreasing_ = false;
};

MonomialSet decreasing_closure(const MonomialSet& s);
bool is_decreasing(const MonomialSet& s);
// Returns s with the decreasing flag set; throws std::invalid_argument if s is not decreasing.
MonomialSet require_decreasing(MonomialSet s);
// M_n minus the complements of I. Requires I decreasing.
MonomialSet dual_set(const MonomialSet& decreasing);
// Strong-order maximal members.
MonomialSet maximal_elements(const MonomialSet& s);
// Divisibility-maximal members of a decreasing set (no x_j multiple stays in the set).
MonomialSet weak_maximal_elements(const MonomialSet& decreasing);

// Generator matrix whose rows are ev(m) for the members of s, in mask order.
BitMatrix evaluation_matrix(const MonomialSet& s);

}  // namespace polartri
