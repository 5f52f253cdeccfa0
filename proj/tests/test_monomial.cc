#include <gtest/gtest.h>

#include <random>

#include "oracles.h"
#include "polartri/monomial.h"

using namespace polartri;

namespace {

MonomialSet set_of(int n, std::vector<uint32_t> masks) { return MonomialSet(n, std::move(masks)); }

std::vector<uint8_t> membership_of(const MonomialSet& s) {
    std::vector<uint8_t> m(size_t{1} << s.num_vars(), 0);
    for (uint32_t x : s.masks()) m[x] = 1;
    return m;
}

// All decreasing subsets of M_n, as membership vectors (n <= 4).
std::vector<MonomialSet> all_decreasing_sets(int n) {
    uint32_t N = 1u << n;
    std::vector<std::vector<uint8_t>> leq(N, std::vector<uint8_t>(N));
    for (uint32_t f = 0; f < N; ++f) {
        for (uint32_t g = 0; g < N; ++g) leq[f][g] = oracle::strong_leq(f, g);
    }
    std::vector<MonomialSet> out;
    for (uint64_t bits = 0; bits < (uint64_t{1} << N); ++bits) {
        bool ok = true;
        for (uint32_t g = 0; g < N && ok; ++g) {
            if (!(bits >> g & 1)) continue;
            for (uint32_t f = 0; f < N && ok; ++f) ok = !leq[f][g] || (bits >> f & 1);
        }
        if (!ok) continue;
        std::vector<uint32_t> masks;
        for (uint32_t m = 0; m < N; ++m) {
            if (bits >> m & 1) masks.push_back(m);
        }
        out.emplace_back(n, masks);
    }
    return out;
}

oracle::Matrix ev_rows(const MonomialSet& s) {
    oracle::Matrix m;
    for (uint32_t x : s.masks()) m.push_back(oracle::evaluate(x, s.num_vars()));
    return m;
}

}  // namespace

TEST(Monomial, ChannelIndexMap) {
    EXPECT_EQ(monomial_from_channel_index(7, 3), Monomial::one(3));
    EXPECT_EQ(monomial_from_channel_index(0, 3), Monomial::full(3));
    EXPECT_EQ(to_string(monomial_from_channel_index(5, 3)), "x1");
    for (uint32_t a = 0; a < 64; ++a) EXPECT_EQ(channel_index_of(monomial_from_channel_index(a, 6)), a);
    EXPECT_THROW(monomial_from_channel_index(8, 3), std::out_of_range);
    EXPECT_THROW(Monomial(0b100, 2), std::invalid_argument);
}

TEST(Monomial, OrderExamples) {
    auto m = [](uint32_t x) { return Monomial(x, 3); };
    EXPECT_TRUE(strong_leq(m(0b011), m(0b101)));
    EXPECT_TRUE(strong_leq(m(0b010), m(0b011)));
    EXPECT_FALSE(strong_leq(m(0b100), m(0b011)));
    EXPECT_TRUE(weak_leq(m(0b001), m(0b011)));
    EXPECT_FALSE(weak_leq(m(0b010), m(0b001)));
    for (uint32_t g = 0; g < 8; ++g) EXPECT_TRUE(weak_leq(Monomial::one(3), m(g)));
    EXPECT_THROW(strong_leq(Monomial(1, 2), Monomial(1, 3)), std::invalid_argument);
}

TEST(Monomial, StrongOrderMatchesDefinitionAndAxioms) {
    for (int n = 1; n <= 5; ++n) {
        uint32_t N = 1u << n;
        for (uint32_t f = 0; f < N; ++f) {
            EXPECT_TRUE(mask::strong_leq(f, f));
            for (uint32_t g = 0; g < N; ++g) {
                bool fg = mask::strong_leq(f, g);
                ASSERT_EQ(fg, oracle::strong_leq(f, g)) << "n=" << n << " f=" << f << " g=" << g;
                if (f != g && fg) EXPECT_FALSE(mask::strong_leq(g, f));
                if (mask::weak_leq(f, g)) EXPECT_TRUE(fg);
                uint32_t full = N - 1;
                EXPECT_EQ(fg, mask::strong_leq(~g & full, ~f & full));
                for (uint32_t h = 0; h < N && fg; ++h) {
                    if (mask::strong_leq(g, h)) EXPECT_TRUE(mask::strong_leq(f, h));
                }
            }
        }
    }
}

TEST(Monomial, CoversGenerateTheOrder) {
    // Transitive closure of the up-covers equals the strong order.
    int n = 5;
    uint32_t N = 1u << n;
    for (uint32_t f = 0; f < N; ++f) {
        std::vector<uint8_t> reach(N, 0);
        std::vector<uint32_t> stack{f};
        reach[f] = 1;
        while (!stack.empty()) {
            uint32_t x = stack.back();
            stack.pop_back();
            mask::for_each_up_cover(x, n, [&](uint32_t y) {
                if (!reach[y]) {
                    reach[y] = 1;
                    stack.push_back(y);
                }
            });
        }
        for (uint32_t g = 0; g < N; ++g) EXPECT_EQ(reach[g] != 0, mask::strong_leq(f, g));
    }
}

TEST(Monomial, ComplementProductEvaluate) {
    EXPECT_EQ(complement(Monomial(0b01, 2)), Monomial(0b10, 2));
    EXPECT_EQ(complement(Monomial::one(3)), Monomial::full(3));
    EXPECT_EQ(product(Monomial(1, 2), Monomial(1, 2)), Monomial(1, 2));
    EXPECT_EQ(product(Monomial(1, 2), Monomial(2, 2)), Monomial(3, 2));
    EXPECT_EQ(evaluate(Monomial::one(2)).str(), "1111");
    EXPECT_EQ(evaluate(Monomial(1, 2)).str(), "0101");
    EXPECT_EQ(evaluate(Monomial(3, 2)).str(), "0001");
    for (int n = 1; n <= 4; ++n) {
        uint32_t N = 1u << n;
        for (uint32_t f = 0; f < N; ++f) {
            EXPECT_EQ(complement(complement(Monomial(f, n))), Monomial(f, n));
            EXPECT_EQ(evaluate(Monomial(f, n)).popcount(), size_t{1} << (n - std::popcount(f)));
            for (uint32_t g = 0; g < N; ++g) {
                EXPECT_EQ(evaluate(Monomial(f, n)) & evaluate(Monomial(g, n)), evaluate(product(Monomial(f, n), Monomial(g, n))));
            }
        }
    }
}

TEST(Monomial, EvaluationVectorsAreIndependent) {
    std::mt19937 rng(3);
    for (int n = 1; n <= 4; ++n) {
        uint32_t N = 1u << n;
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<uint32_t> masks;
            for (uint32_t m = 0; m < N; ++m) {
                if (rng() & 1) masks.push_back(m);
            }
            auto s = set_of(n, masks);
            EXPECT_EQ(oracle::rank(ev_rows(s)), s.size());
            EXPECT_EQ(evaluation_matrix(s).rank(), s.size());
        }
    }
}

TEST(MonomialSet, ClosureExamples) {
    EXPECT_EQ(decreasing_closure(set_of(2, {0b11})), set_of(2, {0, 1, 2, 3}));
    EXPECT_EQ(decreasing_closure(set_of(2, {0b10})), set_of(2, {0, 1, 2}));
    EXPECT_TRUE(is_decreasing(set_of(2, {0, 1})));
    EXPECT_FALSE(is_decreasing(set_of(2, {0b11})));
    EXPECT_TRUE(is_decreasing(MonomialSet::all(5)));
    EXPECT_TRUE(decreasing_closure(set_of(3, {0b101})).decreasing_verified());
    EXPECT_THROW(require_decreasing(set_of(2, {0b11})), std::invalid_argument);
}

TEST(MonomialSet, ClosureMatchesOracle) {
    std::mt19937 rng(11);
    for (int n = 1; n <= 5; ++n) {
        uint32_t N = 1u << n;
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<uint32_t> seeds;
            for (int i = 0; i < 3; ++i) seeds.push_back(rng() % N);
            auto c = decreasing_closure(set_of(n, seeds));
            std::vector<uint8_t> expect(N, 0);
            for (uint32_t f = 0; f < N; ++f) {
                for (uint32_t g : seeds) expect[f] |= oracle::strong_leq(f, g);
            }
            EXPECT_EQ(membership_of(c), expect);
            EXPECT_TRUE(oracle::is_decreasing(expect, n));
            EXPECT_EQ(decreasing_closure(c), c);
        }
    }
}

TEST(MonomialSet, DualExamples) {
    EXPECT_EQ(dual_set(set_of(2, {0, 1, 2})), set_of(2, {0}));
    EXPECT_EQ(dual_set(set_of(2, {0})), set_of(2, {0, 1, 2}));
    EXPECT_TRUE(dual_set(MonomialSet::all(3)).empty());
    EXPECT_THROW(dual_set(set_of(2, {0b11})), std::invalid_argument);
}

TEST(MonomialSet, DualMatchesNullspaceOnEveryDecreasingSet) {
    for (int n = 1; n <= 4; ++n) {
        auto sets = all_decreasing_sets(n);
        size_t N = size_t{1} << n;
        for (const auto& s : sets) {
            auto d = dual_set(s);
            EXPECT_EQ(d.size(), N - s.size());
            EXPECT_TRUE(is_decreasing(d));
            auto null = oracle::nullspace(ev_rows(s), N);
            EXPECT_TRUE(oracle::same_span(null, ev_rows(d))) << "n=" << n << " |I|=" << s.size();
        }
    }
}

TEST(MonomialSet, DualIsInvolution) {
    for (int n = 1; n <= 5; ++n) {
        std::mt19937 rng(n);
        uint32_t N = 1u << n;
        for (int trial = 0; trial < 60; ++trial) {
            auto s = decreasing_closure(set_of(n, {static_cast<uint32_t>(rng() % N), static_cast<uint32_t>(rng() % N)}));
            EXPECT_EQ(dual_set(dual_set(s)), s);
        }
    }
}

TEST(MonomialSet, MaximalElements) {
    EXPECT_EQ(maximal_elements(set_of(2, {0, 1, 2, 3})), set_of(2, {3}));
    EXPECT_EQ(maximal_elements(set_of(3, {0, 1, 2})), set_of(3, {2}));
    EXPECT_EQ(maximal_elements(set_of(3, {0b011, 0b100})), set_of(3, {0b011, 0b100}));
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 5;
        auto s = decreasing_closure(set_of(n, {static_cast<uint32_t>(rng() % 32), static_cast<uint32_t>(rng() % 32)}));
        auto top = maximal_elements(s);
        for (uint32_t f : s.masks()) {
            bool covered = false;
            for (uint32_t g : top.masks()) covered |= mask::strong_leq(f, g);
            EXPECT_TRUE(covered);
        }
        for (uint32_t a : top.masks()) {
            for (uint32_t b : top.masks()) {
                if (a != b) EXPECT_FALSE(mask::strong_leq(a, b));
            }
        }
        auto wtop = weak_maximal_elements(s);
        for (uint32_t f : s.masks()) {
            bool covered = false;
            for (uint32_t g : wtop.masks()) covered |= mask::weak_leq(f, g);
            EXPECT_TRUE(covered);
        }
    }
}
