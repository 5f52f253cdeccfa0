#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.h"
#include "polartri/digest.h"
#include "polartri/monomial.h"
#include "polartri/reliability.h"
#include "polartri/triortho.h"

using namespace polartri;

namespace {

std::vector<MonomialSet> all_decreasing_sets(int n) {
    uint32_t N = 1u << n;
    std::vector<MonomialSet> out;
    for (uint64_t bits = 0; bits < (uint64_t{1} << N); ++bits) {
        bool ok = true;
        for (uint32_t g = 0; g < N && ok; ++g) {
            if (!(bits >> g & 1)) continue;
            for (uint32_t f = 0; f < N && ok; ++f) ok = !oracle::strong_leq(f, g) || (bits >> f & 1);
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

oracle::Matrix rows_of(const BitMatrix& m) {
    oracle::Matrix o(m.rows(), oracle::Row(m.cols()));
    for (size_t r = 0; r < m.rows(); ++r) {
        for (size_t c = 0; c < m.cols(); ++c) o[r][c] = m.get(r, c);
    }
    return o;
}

// Tri-orthogonality straight from the definition, on distinct rows.
bool oracle_triorthogonal(const oracle::Matrix& h) {
    for (size_t a = 0; a < h.size(); ++a) {
        for (size_t b = a + 1; b < h.size(); ++b) {
            int s = 0;
            for (size_t i = 0; i < h[a].size(); ++i) s ^= h[a][i] & h[b][i];
            if (s) return false;
            for (size_t c = b + 1; c < h.size(); ++c) {
                if (oracle::triple_parity(h[a], h[b], h[c])) return false;
            }
        }
    }
    return true;
}

MonomialSet random_decreasing(int n, std::mt19937& rng) {
    uint32_t N = 1u << n;
    std::vector<uint32_t> seeds;
    int count = 1 + rng() % 4;
    for (int i = 0; i < count; ++i) {
        // bias toward low degree so both outcomes of the predicate show up
        uint32_t m = rng() % N;
        int drop = rng() % (n + 1);
        for (int j = 0; j < drop; ++j) m &= ~(1u << (rng() % n));
        seeds.push_back(m);
    }
    return decreasing_closure(MonomialSet(n, seeds));
}

}  // namespace

TEST(TriplyEven, PredicateMatchesCodewordEnumeration) {
    for (int n = 1; n <= 4; ++n) {
        size_t N = size_t{1} << n;
        int positives = 0;
        for (const auto& s : all_decreasing_sets(n)) {
            oracle::Matrix ev;
            for (uint32_t m : s.masks()) ev.push_back(oracle::evaluate(m, n));
            auto dual = oracle::nullspace(ev, N);
            bool expect = oracle::triply_even_span(dual, N);
            ASSERT_EQ(check_triply_even_dual(s), expect) << "n=" << n << " |I|=" << s.size();
            EXPECT_EQ(check_triply_even_dual_full(s), expect);
            positives += expect;
        }
        EXPECT_GT(positives, 0);
    }
}

TEST(TriplyEven, PrunedScanMatchesFullScan) {
    std::mt19937 rng(21);
    for (int n = 1; n <= 10; ++n) {
        int agree_true = 0;
        for (int trial = 0; trial < 200; ++trial) {
            auto s = random_decreasing(n, rng);
            uint64_t pairs = 0;
            bool fast = check_triply_even_dual(s, &pairs);
            ASSERT_EQ(fast, check_triply_even_dual_full(s)) << "n=" << n;
            agree_true += fast;
        }
        if (n >= 3) EXPECT_GT(agree_true, 0) << "n=" << n;
    }
}

TEST(TriplyEven, CounterexampleToStrongMaximalScan) {
    // The dual set of {1, x0, x1, x2} is the set itself. Its only strong-maximal member x2
    // squares into I, but x0 x1 does not.
    MonomialSet s(3, std::vector<uint32_t>{0, 1, 2, 4});
    EXPECT_EQ(check_triply_even_dual(s), check_triply_even_dual_full(s));
    EXPECT_FALSE(check_triply_even_dual(s));
}

TEST(Search, PredicateIsMonotoneAlongTheOrder) {
    for (int n = 2; n <= 8; ++n) {
        for (const auto& t : {bec_reliabilities(0.05, n), uniform_reliabilities(n), mc_bsc_reliabilities(0.02, n, 300, 2)}) {
            auto order = reliability_order(t);
            bool seen = false;
            for (size_t prefix = 0; prefix <= t.size(); ++prefix) {
                bool v = check_triply_even_dual(prefix_closure(order, prefix, n));
                if (seen) ASSERT_TRUE(v) << "n=" << n << " prefix=" << prefix;
                seen = seen || v;
            }
            EXPECT_TRUE(seen);
            auto fast = smallest_triply_even_code(t);
            auto slow = smallest_triply_even_code_linear(t);
            EXPECT_EQ(fast.report.prefix, slow.report.prefix);
            EXPECT_EQ(fast.code.info_set, slow.code.info_set);
            EXPECT_TRUE(check_triply_even_dual(fast.code.info_set));
            if (fast.report.prefix > 0) {
                EXPECT_FALSE(check_triply_even_dual(prefix_closure(order, fast.report.prefix - 1, n)));
            }
        }
    }
}

TEST(Css, FifteenQubitCode) {
    auto search = smallest_triply_even_code(uniform_reliabilities(4));
    EXPECT_EQ(search.report.i_size, 11u);
    EXPECT_EQ(search.report.dual_dim, 5u);
    // Degree <= 1: the dual is the first order Reed-Muller code of length 16.
    EXPECT_EQ(dual_set(search.code.info_set), MonomialSet(4, std::vector<uint32_t>{0, 1, 2, 4, 8}));
    auto c = build_css(search.code, 1, PunctureRule::explicit_list({0}));
    EXPECT_EQ(c.block_len, 15u);
    EXPECT_EQ(c.h1.rows(), 1u);
    EXPECT_EQ(c.h0.rows(), 4u);
    EXPECT_EQ(c.g.rows(), 10u);
    EXPECT_EQ(c.h1.row_weight(0), 15u);  // all-ones row, punctured
    for (size_t r = 0; r < c.h0.rows(); ++r) EXPECT_EQ(c.h0.row_weight(r) % 8, 0u);
    EXPECT_TRUE(oracle_triorthogonal(rows_of(c.stacked())));
    auto ex = verify_triorthogonal(c.stacked(), VerifyMode::exhaustive);
    EXPECT_TRUE(ex.pass);
    EXPECT_EQ(ex.checks, 10u + 10u);
    EXPECT_TRUE(verify_triorthogonal(c.stacked(), VerifyMode::sampled, 500, 3).pass);

    auto r = build_css(search.code, 1, PunctureRule::seeded_random(5));
    EXPECT_EQ(r.punctures.size(), 1u);
    EXPECT_TRUE(verify_triorthogonal(r.stacked(), VerifyMode::exhaustive).pass);
    EXPECT_THROW(build_css(search.code, 0, PunctureRule::first_k()), std::invalid_argument);
    EXPECT_THROW(build_css(search.code, 6, PunctureRule::first_k()), std::invalid_argument);
}

TEST(Css, LargerPunctureSetsStayTriorthogonal) {
    auto search = smallest_triply_even_code(uniform_reliabilities(6));
    for (size_t k = 1; k <= 4; ++k) {
        auto c = build_css(search.code, k, PunctureRule::seeded_random(11));
        EXPECT_EQ(c.h1.rows(), k);
        EXPECT_EQ(c.h1.rows() + c.h0.rows(), search.report.dual_dim);
        EXPECT_EQ(c.stacked().rank(), search.report.dual_dim);
        EXPECT_TRUE(oracle_triorthogonal(rows_of(c.stacked())));
        for (size_t r = 0; r < c.h1.rows(); ++r) EXPECT_EQ(c.h1.row_weight(r) % 2, 1u);
        for (size_t r = 0; r < c.h0.rows(); ++r) EXPECT_EQ(c.h0.row_weight(r) % 2, 0u);
    }
}

TEST(Css, PunctureSystematicRejectsDependentColumns) {
    auto gen = BitMatrix::from_strings({"1100", "0011"});
    EXPECT_THROW(puncture_systematic(gen, {0, 1}), std::invalid_argument);
    EXPECT_THROW(puncture_systematic(gen, {7}), std::out_of_range);
    EXPECT_THROW(puncture_systematic(BitMatrix::from_strings({"1110"}), {0}), std::logic_error);
}

TEST(Css, ComplementSpace) {
    std::mt19937 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        size_t rows = 1 + rng() % 10, cols = 1 + rng() % 70;
        BitMatrix h(rows, cols);
        for (size_t r = 0; r < rows; ++r) {
            for (size_t c = 0; c < cols; ++c) h.set(r, c, rng() & 1);
        }
        auto g = complement_space(h);
        EXPECT_EQ(g.rows(), cols - h.rank());
        EXPECT_EQ(g.rank(), g.rows());
        EXPECT_TRUE(g.mul_transpose(h).is_zero());
        EXPECT_TRUE(oracle::same_span(rows_of(g), oracle::nullspace(rows_of(h), cols)) || g.rows() == 0);
    }
}

TEST(Verify, DetectsViolations) {
    auto pair = BitMatrix::from_strings({"1100000", "0110000"});
    for (auto mode : {VerifyMode::exhaustive, VerifyMode::sampled}) {
        auto rep = verify_triorthogonal(pair, mode, 256, 1);
        EXPECT_FALSE(rep.pass);
        EXPECT_FALSE(rep.message.empty());
    }
    // pairwise even, one odd triple
    auto triple = BitMatrix::from_strings({"1110000", "1101000", "1011000"});
    EXPECT_TRUE(oracle_triorthogonal(rows_of(BitMatrix::from_strings({"1111000", "0000111"}))));
    EXPECT_FALSE(oracle_triorthogonal(rows_of(triple)));
    for (auto mode : {VerifyMode::exhaustive, VerifyMode::sampled}) EXPECT_FALSE(verify_triorthogonal(triple, mode, 256, 2).pass);
    auto rep = verify_triorthogonal(triple, VerifyMode::exhaustive);
    EXPECT_EQ(rep.witness.size(), 3u);

    std::mt19937 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        size_t rows = 2 + rng() % 4, cols = 4 + rng() % 10;
        BitMatrix h(rows, cols);
        for (size_t r = 0; r < rows; ++r) {
            for (size_t c = 0; c < cols; ++c) h.set(r, c, rng() % 3 == 0);
        }
        bool expect = oracle_triorthogonal(rows_of(h));
        EXPECT_EQ(verify_triorthogonal(h, VerifyMode::exhaustive).pass, expect);
        if (expect) EXPECT_TRUE(verify_triorthogonal(h, VerifyMode::sampled, 256, trial).pass);
    }
}

TEST(PunctureRule, ParseAndPrint) {
    for (std::string s : {"first_k", "random:7", "explicit:0,1,2,4,8"}) EXPECT_EQ(to_string(parse_puncture_rule(s)), s);
    EXPECT_EQ(parse_puncture_rule("explicit:3,1").list, (std::vector<uint32_t>{3, 1}));
    EXPECT_THROW(parse_puncture_rule("random:x"), std::invalid_argument);
    EXPECT_THROW(parse_puncture_rule("sometimes"), std::invalid_argument);
    EXPECT_EQ(default_puncture_count(50), 1u);
    EXPECT_EQ(default_puncture_count(1234), 12u);
}

TEST(Css, GoldenDigestAndRoundTrip) {
    auto search = smallest_triply_even_code(bec_reliabilities(0.01, 14));
    size_t k = default_puncture_count(search.report.dual_dim);
    auto c = build_css(search.code, k, PunctureRule::seeded_random(7));
    EXPECT_EQ(c.block_len, 16384u - k);
    EXPECT_EQ(hex64(c.digest()), "356980b915101c7e");
    std::stringstream buf;
    write_code(c, buf);
    auto back = read_code(buf);
    EXPECT_EQ(back.h1, c.h1);
    EXPECT_EQ(back.h0, c.h0);
    EXPECT_EQ(back.g, c.g);
    EXPECT_EQ(back.header.at("digest").get<std::string>(), hex64(c.digest()));
    EXPECT_EQ(back.header.at("k").get<size_t>(), k);
    std::stringstream again;
    write_code(c, again);
    EXPECT_EQ(again.str(), [&] {
        std::stringstream s;
        write_code(c, s);
        return s.str();
    }());
    std::istringstream truncated(again.str().substr(0, again.str().size() - 3));
    EXPECT_THROW(read_code(truncated), std::runtime_error);
}
