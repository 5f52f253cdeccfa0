#include "polartri/monomial.h"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace polartri {

namespace {

void check_vars(int n) {
    if (n < 0 || n > kMaxVars) throw std::out_of_range("variable count must be in [0, 24]");
}

void check_same(const Monomial& f, const Monomial& g) {
    if (f.num_vars() != g.num_vars()) throw std::invalid_argument("monomials over different variable counts");
}

}  // namespace

Monomial::Monomial(uint32_t exponents, int num_vars) : mask_(exponents), n_(num_vars) {
    check_vars(num_vars);
    if (exponents & ~mask::full(num_vars)) throw std::invalid_argument("exponent bits beyond variable count");
}

Monomial Monomial::full(int num_vars) {
    check_vars(num_vars);
    return Monomial(mask::full(num_vars), num_vars);
}

int Monomial::degree() const { return std::popcount(mask_); }

std::vector<int> Monomial::variables() const {
    std::vector<int> v;
    for (int t = 0; t < n_; ++t) {
        if (has(t)) v.push_back(t);
    }
    return v;
}

std::string to_string(const Monomial& m) {
    if (m.exponents() == 0) return "1";
    std::string s;
    for (int t : m.variables()) s += "x" + std::to_string(t);
    return s;
}

Monomial monomial_from_channel_index(uint32_t a, int num_vars) {
    check_vars(num_vars);
    if (a > mask::full(num_vars)) throw std::out_of_range("channel index out of range");
    return Monomial(~a & mask::full(num_vars), num_vars);
}

uint32_t channel_index_of(const Monomial& m) { return ~m.exponents() & mask::full(m.num_vars()); }

namespace mask {

// Comparing the descending variable lists pointwise against the largest variables of g is
// the same as: for every t, f has no more variables >= t than g does.
bool strong_leq(uint32_t f, uint32_t g) {
    // Counts on f's side only change at f's own variables, so those thresholds suffice.
    for (uint32_t rest = f; rest; rest &= rest - 1) {
        int t = std::countr_zero(rest);
        if (std::popcount(f >> t) > std::popcount(g >> t)) return false;
    }
    return true;
}

}  // namespace mask

bool strong_leq(const Monomial& f, const Monomial& g) {
    check_same(f, g);
    return mask::strong_leq(f.exponents(), g.exponents());
}

bool weak_leq(const Monomial& f, const Monomial& g) {
    check_same(f, g);
    return mask::weak_leq(f.exponents(), g.exponents());
}

Monomial complement(const Monomial& m) { return Monomial(~m.exponents() & mask::full(m.num_vars()), m.num_vars()); }

Monomial product(const Monomial& f, const Monomial& g) {
    check_same(f, g);
    return Monomial(f.exponents() | g.exponents(), f.num_vars());
}

BitVector evaluate(const Monomial& m) {
    size_t len = size_t{1} << m.num_vars();
    BitVector v(len);
    uint32_t e = m.exponents();
    // Points u with (u & e) == e are exactly e | s for s a submask of ~e.
    uint32_t free = ~e & mask::full(m.num_vars());
    uint32_t s = free;
    while (true) {
        v.set(e | s, true);
        if (s == 0) break;
        s = (s - 1) & free;
    }
    return v;
}

MonomialSet::MonomialSet(int num_vars) : n_(num_vars) {
    check_vars(num_vars);
    bits_.assign(words_for_bits(size_t{1} << num_vars), 0);
}

MonomialSet::MonomialSet(int num_vars, std::vector<uint32_t> masks) : MonomialSet(num_vars) {
    for (uint32_t m : masks) {
        if (m > mask::full(num_vars)) throw std::invalid_argument("monomial mask beyond variable count");
        bits_[m >> 6] |= uint64_t{1} << (m & 63);
    }
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    masks_ = std::move(masks);
}

MonomialSet::MonomialSet(int num_vars, const std::vector<Monomial>& members) : MonomialSet(num_vars) {
    std::vector<uint32_t> masks;
    masks.reserve(members.size());
    for (const auto& m : members) {
        if (m.num_vars() != num_vars) throw std::invalid_argument("member has wrong variable count");
        masks.push_back(m.exponents());
    }
    *this = MonomialSet(num_vars, std::move(masks));
}

MonomialSet MonomialSet::all(int num_vars) {
    check_vars(num_vars);
    std::vector<uint64_t> bits(words_for_bits(size_t{1} << num_vars), ~uint64_t{0});
    size_t total = size_t{1} << num_vars;
    if (total & 63) bits.back() = (uint64_t{1} << (total & 63)) - 1;
    return from_membership(num_vars, std::move(bits), true);
}

MonomialSet MonomialSet::from_membership(int num_vars, std::vector<uint64_t> bitset, bool decreasing) {
    MonomialSet s(num_vars);
    if (bitset.size() != s.bits_.size()) throw std::invalid_argument("membership bitset has wrong size");
    size_t total = size_t{1} << num_vars;
    for (size_t w = 0; w < bitset.size(); ++w) {
        uint64_t b = bitset[w];
        while (b) {
            size_t m = (w << 6) + std::countr_zero(b);
            if (m >= total) throw std::invalid_argument("membership bitset has bits past 2^n");
            s.masks_.push_back(static_cast<uint32_t>(m));
            b &= b - 1;
        }
    }
    s.bits_ = std::move(bitset);
    s.decreasing_ = decreasing;
    return s;
}

bool MonomialSet::contains(const Monomial& m) const {
    if (m.num_vars() != n_) throw std::invalid_argument("monomial has wrong variable count");
    return contains(m.exponents());
}

std::vector<Monomial> MonomialSet::members() const {
    std::vector<Monomial> out;
    out.reserve(masks_.size());
    for (uint32_t m : masks_) out.emplace_back(m, n_);
    return out;
}

MonomialSet decreasing_closure(const MonomialSet& s) {
    if (s.decreasing_verified()) return s;
    int n = s.num_vars();
    std::vector<uint64_t> bits(s.membership().begin(), s.membership().end());
    std::vector<uint32_t> stack(s.masks().begin(), s.masks().end());
    while (!stack.empty()) {
        uint32_t f = stack.back();
        stack.pop_back();
        mask::for_each_down_cover(f, n, [&](uint32_t d) {
            uint64_t bit = uint64_t{1} << (d & 63);
            if (!(bits[d >> 6] & bit)) {
                bits[d >> 6] |= bit;
                stack.push_back(d);
            }
        });
    }
    return MonomialSet::from_membership(n, std::move(bits), true);
}

bool is_decreasing(const MonomialSet& s) {
    if (s.decreasing_verified()) return true;
    int n = s.num_vars();
    for (uint32_t f : s.masks()) {
        bool ok = true;
        mask::for_each_down_cover(f, n, [&](uint32_t d) { ok = ok && s.contains(d); });
        if (!ok) return false;
    }
    return true;
}

MonomialSet require_decreasing(MonomialSet s) {
    if (!is_decreasing(s)) throw std::invalid_argument("monomial set is not decreasing");
    s.decreasing_ = true;
    return s;
}

MonomialSet dual_set(const MonomialSet& decreasing) {
    if (!is_decreasing(decreasing)) throw std::invalid_argument("dual_set requires a decreasing set");
    int n = decreasing.num_vars();
    uint32_t full = mask::full(n);
    size_t total = size_t{1} << n;
    std::vector<uint64_t> bits(words_for_bits(total), 0);
    for (size_t f = 0; f < total; ++f) {
        if (!decreasing.contains(full ^ static_cast<uint32_t>(f))) bits[f >> 6] |= uint64_t{1} << (f & 63);
    }
    return MonomialSet::from_membership(n, std::move(bits), true);
}

MonomialSet maximal_elements(const MonomialSet& s) {
    // Maximal elements of s and of its closure coincide, and in a decreasing set an element
    // is maximal iff none of its up-covers is present.
    MonomialSet c = decreasing_closure(s);
    int n = s.num_vars();
    std::vector<uint32_t> out;
    for (uint32_t f : c.masks()) {
        bool maximal = true;
        mask::for_each_up_cover(f, n, [&](uint32_t u) { maximal = maximal && !c.contains(u); });
        if (maximal) out.push_back(f);
    }
    return MonomialSet(n, std::move(out));
}

MonomialSet weak_maximal_elements(const MonomialSet& decreasing) {
    if (!is_decreasing(decreasing)) throw std::invalid_argument("weak_maximal_elements requires a decreasing set");
    int n = decreasing.num_vars();
    std::vector<uint32_t> out;
    for (uint32_t f : decreasing.masks()) {
        bool maximal = true;
        for (int j = 0; j < n && maximal; ++j) {
            uint32_t bit = uint32_t{1} << j;
            if (!(f & bit) && decreasing.contains(f | bit)) maximal = false;
        }
        if (maximal) out.push_back(f);
    }
    return MonomialSet(n, std::move(out));
}

BitMatrix evaluation_matrix(const MonomialSet& s) {
    size_t len = size_t{1} << s.num_vars();
    BitMatrix g(0, len);
    for (uint32_t m : s.masks()) g.append_row(evaluate(Monomial(m, s.num_vars())));
    return g;
}

}  // namespace polartri
