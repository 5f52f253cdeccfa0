#include "polartri/triortho.h"

#include <algorithm>
#include <chrono>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "polartri/digest.h"
#include "polartri/rng.h"

namespace polartri {

bool check_triply_even_dual(const MonomialSet& info_set, uint64_t* pairs_checked) {
    MonomialSet dual = dual_set(info_set);
    MonomialSet top = weak_maximal_elements(dual);
    auto m = top.masks();
    uint64_t pairs = 0;
    bool ok = true;
    for (size_t i = 0; i < m.size() && ok; ++i) {
        for (size_t j = i; j < m.size(); ++j) {
            ++pairs;
            if (!info_set.contains(m[i] | m[j])) {
                ok = false;
                break;
            }
        }
    }
    if (pairs_checked) *pairs_checked += pairs;
    return ok;
}

bool check_triply_even_dual_full(const MonomialSet& info_set) {
    MonomialSet dual = dual_set(info_set);
    auto m = dual.masks();
    for (size_t i = 0; i < m.size(); ++i) {
        for (size_t j = i; j < m.size(); ++j) {
            if (!info_set.contains(m[i] | m[j])) return false;
        }
    }
    return true;
}

namespace {

SearchResult finish_search(const ReliabilityTable& table, const std::vector<uint32_t>& order, size_t prefix,
                           SearchReport report, std::chrono::steady_clock::time_point start) {
    MonomialSet info = prefix_closure(order, prefix, table.n);
    SearchResult res{code_from_info_set(table, std::move(info)), std::move(report)};
    auto& r = res.report;
    r.channel = table.channel;
    r.n = table.n;
    r.prefix = prefix;
    r.i_size = res.code.dimension();
    r.dual_dim = res.code.length() - r.i_size;
    r.threshold_log2_eps = res.code.threshold_log2_eps;
    double rate = static_cast<double>(r.i_size) / static_cast<double>(res.code.length());
    r.capacity_ok = !table.channel || rate <= capacity(*table.channel);
    r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

}  // namespace

SearchResult smallest_triply_even_code(const ReliabilityTable& table) {
    auto start = std::chrono::steady_clock::now();
    auto order = reliability_order(table);
    SearchReport report;
    auto qualifies = [&](size_t prefix) {
        ++report.evaluations;
        return check_triply_even_dual(prefix_closure(order, prefix, table.n), &report.pairs_checked);
    };
    // Invariant: prefix hi qualifies (the whole space always does), lo - 1 does not.
    size_t lo = 0, hi = order.size();
    while (lo < hi) {
        size_t mid = lo + (hi - lo) / 2;
        if (qualifies(mid)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return finish_search(table, order, lo, report, start);
}

SearchResult smallest_triply_even_code_linear(const ReliabilityTable& table) {
    auto start = std::chrono::steady_clock::now();
    auto order = reliability_order(table);
    SearchReport report;
    size_t prefix = 0;
    while (prefix < order.size()) {
        ++report.evaluations;
        if (check_triply_even_dual(prefix_closure(order, prefix, table.n), &report.pairs_checked)) break;
        ++prefix;
    }
    return finish_search(table, order, prefix, report, start);
}

BitMatrix dual_generator(const MonomialSet& info_set) { return evaluation_matrix(dual_set(info_set)); }

SystematicSplit puncture_systematic(const BitMatrix& gen, const std::vector<uint32_t>& punctures) {
    size_t k = punctures.size();
    for (uint32_t c : punctures) {
        if (c >= gen.cols()) throw std::out_of_range("puncture position beyond block length");
    }
    BitMatrix m = gen;
    for (size_t i = 0; i < k; ++i) {
        size_t c = punctures[i];
        size_t pivot = i;
        while (pivot < m.rows() && !m.get(pivot, c)) ++pivot;
        if (pivot == m.rows()) {
            throw std::invalid_argument("punctured columns are not an information set for the dual code");
        }
        m.swap_rows(i, pivot);
        for (size_t r = 0; r < m.rows(); ++r) {
            if (r != i && m.get(r, c)) m.xor_row_into(i, r);
        }
    }
    std::vector<size_t> head(k), tail;
    for (size_t i = 0; i < k; ++i) head[i] = i;
    for (size_t i = k; i < m.rows(); ++i) tail.push_back(i);
    SystematicSplit out;
    out.h1 = m.select_rows(head).remove_columns(punctures);
    out.h0 = m.select_rows(tail).remove_columns(punctures);
    out.h0.rref_in_place();
    for (size_t r = 0; r < out.h1.rows(); ++r) {
        if (out.h1.row_weight(r) % 2 != 1) throw std::logic_error("systematic form: logical row of even weight");
    }
    for (size_t r = 0; r < out.h0.rows(); ++r) {
        if (out.h0.row_weight(r) % 2 != 0) throw std::logic_error("systematic form: stabilizer row of odd weight");
    }
    return out;
}

BitMatrix complement_space(const BitMatrix& h) {
    BitMatrix r = h;
    auto pivots = r.rref_in_place();
    size_t cols = h.cols();
    std::vector<uint8_t> is_pivot(cols, 0);
    for (size_t p : pivots) is_pivot[p] = 1;
    BitMatrix g(0, cols);
    BitVector v(cols);
    for (size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        v = BitVector(cols);
        v.set(f, true);
        for (size_t row = 0; row < pivots.size(); ++row) {
            if (r.get(row, f)) v.set(pivots[row], true);
        }
        g.append_row(v);
    }
    return g;
}

namespace {

VerifyReport verify_exhaustive(const BitMatrix& h) {
    VerifyReport rep;
    rep.mode_used = VerifyMode::exhaustive;
    size_t m = h.rows();
    std::vector<uint64_t> pair(h.stride());
    for (size_t a = 0; a < m; ++a) {
        auto ra = h.row(a);
        for (size_t b = a + 1; b < m; ++b) {
            auto rb = h.row(b);
            size_t w = 0;
            for (size_t i = 0; i < pair.size(); ++i) {
                pair[i] = ra[i] & rb[i];
                w += std::popcount(pair[i]);
            }
            ++rep.checks;
            if (w & 1) {
                rep.pass = false;
                rep.witness = {a, b};
                rep.message = "odd pairwise overlap between rows " + std::to_string(a) + " and " + std::to_string(b);
                return rep;
            }
            for (size_t c = b + 1; c < m; ++c) {
                ++rep.checks;
                if (and_popcount(pair, h.row(c)) & 1) {
                    rep.pass = false;
                    rep.witness = {a, b, c};
                    rep.message = "odd triple overlap among rows " + std::to_string(a) + ", " + std::to_string(b) +
                                  ", " + std::to_string(c);
                    return rep;
                }
            }
        }
    }
    return rep;
}

VerifyReport verify_sampled(const BitMatrix& h, uint64_t trials, uint64_t seed) {
    VerifyReport rep;
    rep.mode_used = VerifyMode::sampled;
    size_t m = h.rows(), stride = h.stride();
    std::vector<uint8_t> odd(m);
    for (size_t r = 0; r < m; ++r) odd[r] = h.row_weight(r) & 1;
    std::vector<uint64_t> vec[3];
    std::vector<uint8_t> coef[3];
    for (uint64_t t = 0; t < trials; ++t) {
        Rng rng(seed, t);
        for (int s = 0; s < 3; ++s) {
            vec[s].assign(stride, 0);
            coef[s].resize(m);
            for (size_t r = 0; r < m; ++r) {
                coef[s][r] = rng.next() >> 63;
                if (!coef[s][r]) continue;
                auto row = h.row(r);
                for (size_t i = 0; i < stride; ++i) vec[s][i] ^= row[i];
            }
        }
        int expect_pair = 0, expect_triple = 0;
        for (size_t r = 0; r < m; ++r) {
            if (!odd[r]) continue;
            expect_pair ^= coef[0][r] & coef[1][r];
            expect_triple ^= coef[0][r] & coef[1][r] & coef[2][r];
        }
        int pair = 0, triple = 0;
        for (size_t i = 0; i < stride; ++i) {
            uint64_t uv = vec[0][i] & vec[1][i];
            pair ^= std::popcount(uv) & 1;
            triple ^= std::popcount(uv & vec[2][i]) & 1;
        }
        rep.checks += 2;
        if (pair != expect_pair || triple != expect_triple) {
            rep.pass = false;
            rep.witness = {static_cast<size_t>(t)};
            rep.message = "sampled trial " + std::to_string(t) + " found an odd " + (pair != expect_pair ? "pairwise" : "triple") +
                          " overlap in the row space";
            return rep;
        }
    }
    return rep;
}

}  // namespace

VerifyReport verify_triorthogonal(const BitMatrix& h, VerifyMode mode, uint64_t trials, uint64_t seed) {
    if (mode == VerifyMode::automatic) {
        mode = h.rows() <= kExhaustiveRowLimit ? VerifyMode::exhaustive : VerifyMode::sampled;
    }
    return mode == VerifyMode::exhaustive ? verify_exhaustive(h) : verify_sampled(h, trials, seed);
}

std::string to_string(const PunctureRule& rule) {
    switch (rule.kind) {
        case PunctureRule::Kind::first_k: return "first_k";
        case PunctureRule::Kind::seeded_random: return "random:" + std::to_string(rule.seed);
        case PunctureRule::Kind::explicit_list: {
            std::string s = "explicit:";
            for (size_t i = 0; i < rule.list.size(); ++i) s += (i ? "," : "") + std::to_string(rule.list[i]);
            return s;
        }
    }
    return "unknown";
}

PunctureRule parse_puncture_rule(const std::string& s) {
    if (s == "first_k") return PunctureRule::first_k();
    auto colon = s.find(':');
    std::string head = s.substr(0, colon), rest = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (head == "random" || head == "seeded_random") return PunctureRule::seeded_random(rest.empty() ? 0 : std::stoull(rest));
    if (head == "explicit" && !rest.empty()) {
        std::vector<uint32_t> list;
        std::stringstream in(rest);
        for (std::string item; std::getline(in, item, ',');) list.push_back(static_cast<uint32_t>(std::stoul(item)));
        return PunctureRule::explicit_list(std::move(list));
    }
    throw std::invalid_argument("puncture rule must be first_k, random:SEED or explicit:i,j,...");
}

BitMatrix TriorthogonalCode::stacked() const {
    BitMatrix s = h1;
    for (size_t r = 0; r < h0.rows(); ++r) s.append_row(h0.row(r));
    return s;
}

uint64_t TriorthogonalCode::digest() const {
    uint64_t state = 0xcbf29ce484222325ull;
    for (const BitMatrix* m : {&h1, &h0, &g}) {
        uint64_t dims[2] = {m->rows(), m->cols()};
        for (uint64_t d : dims) {
            uint8_t b[8];
            for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>(d >> (8 * i));
            state = fnv1a64(b, state);
        }
        state = fnv1a64(m->packed_bytes(), state);
    }
    return state;
}

size_t default_puncture_count(size_t dual_dim) { return std::max<size_t>(1, dual_dim / 100); }

namespace {

std::vector<uint32_t> random_subset(size_t N, size_t k, uint64_t seed, uint64_t attempt) {
    Rng rng(seed, attempt);
    std::vector<uint32_t> idx(N);
    for (size_t i = 0; i < N; ++i) idx[i] = static_cast<uint32_t>(i);
    for (size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(N - i)]);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

// Systematic split plus the full-rank check on [H1; H0]; nullopt when this puncture set fails.
std::optional<SystematicSplit> try_puncture(const BitMatrix& gen, const std::vector<uint32_t>& punctures) {
    SystematicSplit split;
    try {
        split = puncture_systematic(gen, punctures);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
    // A dual codeword supported inside the punctures would leave H1 dependent modulo H0.
    BitMatrix s = split.h1;
    for (size_t r = 0; r < split.h0.rows(); ++r) s.append_row(split.h0.row(r));
    if (s.rank() != gen.rows()) return std::nullopt;
    return split;
}

// g h^T = 0 tested against random combinations of the rows of h; a nonzero product survives
// each round with probability 1/2. The full product costs |g| |h| row dots.
bool orthogonal_by_projection(const BitMatrix& g, const BitMatrix& h, int rounds = 64) {
    std::vector<uint64_t> w(h.stride());
    for (int t = 0; t < rounds; ++t) {
        Rng rng(0x6f7274686fULL, static_cast<uint64_t>(t));
        std::fill(w.begin(), w.end(), 0);
        for (size_t r = 0; r < h.rows(); ++r) {
            if (!(rng.next() >> 63)) continue;
            auto row = h.row(r);
            for (size_t i = 0; i < w.size(); ++i) w[i] ^= row[i];
        }
        for (size_t r = 0; r < g.rows(); ++r) {
            if (and_popcount(g.row(r), w) & 1) return false;
        }
    }
    return true;
}

}  // namespace

TriorthogonalCode build_css(const PolarCode& code, size_t k, const PunctureRule& rule) {
    if (!check_triply_even_dual(code.info_set)) throw std::invalid_argument("build_css: dual code is not triply even");
    BitMatrix gen = dual_generator(code.info_set);
    size_t N = code.length();
    if (rule.kind == PunctureRule::Kind::explicit_list) k = rule.list.size();
    if (k < 1) throw std::invalid_argument("build_css: k must be at least 1");
    if (k > gen.rows()) throw std::invalid_argument("build_css: k exceeds the dual dimension");

    std::vector<uint32_t> punctures;
    std::optional<SystematicSplit> split;
    switch (rule.kind) {
        case PunctureRule::Kind::first_k:
            for (uint32_t i = 0; i < k; ++i) punctures.push_back(i);
            split = try_puncture(gen, punctures);
            break;
        case PunctureRule::Kind::explicit_list:
            punctures = rule.list;
            std::sort(punctures.begin(), punctures.end());
            if (std::adjacent_find(punctures.begin(), punctures.end()) != punctures.end()) {
                throw std::invalid_argument("build_css: repeated puncture position");
            }
            split = try_puncture(gen, punctures);
            break;
        case PunctureRule::Kind::seeded_random:
            for (int attempt = 0; attempt < kPunctureRetries && !split; ++attempt) {
                punctures = random_subset(N, k, rule.seed, static_cast<uint64_t>(attempt));
                split = try_puncture(gen, punctures);
            }
            break;
    }
    if (!split) throw std::runtime_error("build_css: no valid puncture set for rule " + to_string(rule));

    TriorthogonalCode out;
    out.block_len = N - k;
    out.k = k;
    out.h1 = std::move(split->h1);
    out.h0 = std::move(split->h0);
    out.punctures = std::move(punctures);
    out.source = code;
    BitMatrix h = out.stacked();
    out.g = complement_space(h);
    auto rep = verify_triorthogonal(h);
    if (!rep.pass) throw std::logic_error("build_css: emitted matrix is not tri-orthogonal: " + rep.message);
    if (!orthogonal_by_projection(out.g, h)) throw std::logic_error("build_css: complement space not orthogonal");
    return out;
}

void write_code(const TriorthogonalCode& code, std::ostream& out) {
    nlohmann::json header;
    header["N"] = code.source.length();
    header["block_len"] = code.block_len;
    header["k"] = code.k;
    header["punctures"] = code.punctures;
    header["source"] = code_descriptor(code.source);
    header["digest"] = hex64(code.digest());
    for (auto [name, m] : {std::pair{"H1", &code.h1}, std::pair{"H0", &code.h0}, std::pair{"G", &code.g}}) {
        header["sections"].push_back({{"name", name}, {"rows", m->rows()}, {"cols", m->cols()}});
    }
    out << header.dump() << '\n';
    for (const BitMatrix* m : {&code.h1, &code.h0, &code.g}) {
        auto bytes = m->packed_bytes();
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    }
}

StoredCode read_code(std::istream& in) {
    StoredCode sc;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_code: missing header");
    sc.header = nlohmann::json::parse(line);
    BitMatrix* targets[3] = {&sc.h1, &sc.h0, &sc.g};
    const auto& sections = sc.header.at("sections");
    if (sections.size() != 3) throw std::runtime_error("read_code: expected three matrix sections");
    for (size_t s = 0; s < 3; ++s) {
        size_t rows = sections[s].at("rows"), cols = sections[s].at("cols");
        std::vector<uint8_t> bytes(rows * ((cols + 7) / 8));
        in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (static_cast<size_t>(in.gcount()) != bytes.size()) throw std::runtime_error("read_code: truncated matrix");
        *targets[s] = BitMatrix::from_packed_bytes(rows, cols, bytes);
    }
    return sc;
}

}  // namespace polartri
