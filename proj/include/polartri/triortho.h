#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polartri/bits.h"
#include "polartri/monomial.h"
#include "polartri/polar_code.h"
#include "polartri/reliability.h"

namespace polartri {

// Whether C(I)^perp = C(dual_set(I)) is triply even, i.e. dual_set(I) * dual_set(I) lies in I.
// Only pairs of divisibility-maximal members of the dual set are tested: a product of divisors
// divides the product, and I is closed under divisors.
bool check_triply_even_dual(const MonomialSet& info_set, uint64_t* pairs_checked = nullptr);
// Every pair of the dual set; reference for the pruned scan.
bool check_triply_even_dual_full(const MonomialSet& info_set);

struct SearchReport {
    std::optional<ChannelSpec> channel;
    int n = 0;
    size_t prefix = 0;     // reliability-order prefix whose closure is I
    size_t i_size = 0;
    size_t dual_dim = 0;
    double threshold_log2_eps = 0.0;
    bool capacity_ok = true;
    uint64_t pairs_checked = 0;
    int evaluations = 0;   // predicate calls
    double elapsed = 0.0;  // seconds
};

struct SearchResult {
    PolarCode code;
    SearchReport report;
};

// Smallest reliability-order prefix whose down-closure has a triply-even dual. The predicate
// grows with the prefix, so a binary search is exact.
SearchResult smallest_triply_even_code(const ReliabilityTable& table);
// Same answer by scanning prefixes upward.
SearchResult smallest_triply_even_code_linear(const ReliabilityTable& table);

// Rows ev(m) for m in dual_set(I); generates C(I)^perp.
BitMatrix dual_generator(const MonomialSet& info_set);

struct SystematicSplit {
    BitMatrix h1;  // k rows, odd weight
    BitMatrix h0;  // even weight, reduced row echelon form
};

// Row-reduces `gen` to [[1_k, H1], [0, H0]] on the punctured columns and drops those columns.
// Throws std::invalid_argument if the punctured columns of `gen` are dependent.
SystematicSplit puncture_systematic(const BitMatrix& gen, const std::vector<uint32_t>& punctures);

// Basis of the GF(2) nullspace of H, as rows.
BitMatrix complement_space(const BitMatrix& h);

enum class VerifyMode { exhaustive, sampled, automatic };

struct VerifyReport {
    bool pass = true;
    VerifyMode mode_used = VerifyMode::exhaustive;
    uint64_t checks = 0;
    std::vector<size_t> witness;  // offending rows (exhaustive) or trial number (sampled)
    std::string message;
};

// Exhaustive: every pair and triple of distinct rows has even overlap.
// Sampled: random u, v, w in the row space. Off-diagonal overlaps vanish on a tri-orthogonal
// matrix, so |u*v| and |u*v*w| reduce mod 2 to the coefficient products on odd-weight rows;
// any violated overlap breaks that identity with probability at least 1/8 per trial.
// Automatic picks exhaustive up to kExhaustiveRowLimit rows.
inline constexpr size_t kExhaustiveRowLimit = 256;
VerifyReport verify_triorthogonal(const BitMatrix& h, VerifyMode mode = VerifyMode::automatic, uint64_t trials = 256,
                                  uint64_t seed = 0);

struct PunctureRule {
    enum class Kind { first_k, explicit_list, seeded_random };
    Kind kind = Kind::seeded_random;
    uint64_t seed = 0;
    std::vector<uint32_t> list;

    static PunctureRule first_k() { return {Kind::first_k, 0, {}}; }
    static PunctureRule explicit_list(std::vector<uint32_t> l) { return {Kind::explicit_list, 0, std::move(l)}; }
    static PunctureRule seeded_random(uint64_t s) { return {Kind::seeded_random, s, {}}; }
};

std::string to_string(const PunctureRule& rule);
PunctureRule parse_puncture_rule(const std::string& s);  // first_k, random:SEED, explicit:0,1,2

inline constexpr int kPunctureRetries = 64;

struct TriorthogonalCode {
    size_t block_len = 0;  // N - k
    size_t k = 0;
    BitMatrix h1, h0, g;
    std::vector<uint32_t> punctures;  // ascending; row i of h1 belongs to punctures[i]
    PolarCode source;

    BitMatrix stacked() const;  // [h1; h0]
    uint64_t digest() const;
};

// max(1, floor(dual_dim / 100)).
size_t default_puncture_count(size_t dual_dim);

TriorthogonalCode build_css(const PolarCode& code, size_t k, const PunctureRule& rule);

// JSON header line, then the packed rows of h1, h0 and g.
void write_code(const TriorthogonalCode& code, std::ostream& out);
struct StoredCode {
    nlohmann::json header;
    BitMatrix h1, h0, g;
};
StoredCode read_code(std::istream& in);

}  // namespace polartri
