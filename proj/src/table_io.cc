#include "polartri/table_io.h"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <stdexcept>

#include "polartri/digest.h"
#include "polartri/monomial.h"

namespace polartri {

namespace {

constexpr uint32_t tag(const char (&s)[5]) {
    return uint32_t(uint8_t(s[0])) | uint32_t(uint8_t(s[1])) << 8 | uint32_t(uint8_t(s[2])) << 16 |
           uint32_t(uint8_t(s[3])) << 24;
}

constexpr uint32_t kMagic = tag("PRT1");
constexpr uint32_t kTagChannel = tag("CHNP");
constexpr uint32_t kTagStderr = tag("SERR");

class Writer {
   public:
    void u32(uint32_t v) { put(v, 4); }
    void u64(uint64_t v) { put(v, 8); }
    void f64(double v) { put(std::bit_cast<uint64_t>(v), 8); }
    std::vector<uint8_t> take() { return std::move(buf_); }

   private:
    void put(uint64_t v, int bytes) {
        for (int i = 0; i < bytes; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    std::vector<uint8_t> buf_;
};

class Reader {
   public:
    explicit Reader(const std::vector<uint8_t>& b) : b_(b) {}
    uint32_t u32() { return static_cast<uint32_t>(get(4)); }
    uint64_t u64() { return get(8); }
    double f64() { return std::bit_cast<double>(get(8)); }
    bool done() const { return pos_ == b_.size(); }

   private:
    uint64_t get(int bytes) {
        if (pos_ + bytes > b_.size()) throw std::runtime_error("reliability table: truncated data");
        uint64_t v = 0;
        for (int i = 0; i < bytes; ++i) v |= uint64_t{b_[pos_ + i]} << (8 * i);
        pos_ += bytes;
        return v;
    }
    const std::vector<uint8_t>& b_;
    size_t pos_ = 0;
};

}  // namespace

std::vector<uint8_t> serialize_table(const ReliabilityTable& t) {
    Writer w;
    w.u32(kMagic);
    w.u32(static_cast<uint32_t>(t.n));
    w.u32(static_cast<uint32_t>(t.method));
    w.u64(t.samples);
    w.u64(t.seed);
    for (double v : t.log2_z) w.f64(v);
    if (t.channel) {
        w.u32(kTagChannel);
        w.f64(t.channel->p());
    }
    if (!t.log2_stderr.empty()) {
        w.u32(kTagStderr);
        for (double v : t.log2_stderr) w.f64(v);
    }
    return w.take();
}

ReliabilityTable deserialize_table(const std::vector<uint8_t>& bytes) {
    Reader r(bytes);
    if (r.u32() != kMagic) throw std::runtime_error("reliability table: bad magic");
    ReliabilityTable t;
    t.n = static_cast<int>(r.u32());
    if (t.n < 0 || t.n > kMaxVars) throw std::runtime_error("reliability table: bad block exponent");
    uint32_t method = r.u32();
    if (method > 2) throw std::runtime_error("reliability table: unknown method");
    t.method = static_cast<ReliabilityMethod>(method);
    t.samples = r.u64();
    t.seed = r.u64();
    size_t N = size_t{1} << t.n;
    t.log2_z.resize(N);
    for (double& v : t.log2_z) v = r.f64();
    while (!r.done()) {
        uint32_t section = r.u32();
        if (section == kTagChannel) {
            double p = r.f64();
            t.channel = t.method == ReliabilityMethod::monte_carlo_bsc ? ChannelSpec::binary_symmetric(p)
                                                                        : ChannelSpec::erasure(p);
        } else if (section == kTagStderr) {
            t.log2_stderr.resize(N);
            for (double& v : t.log2_stderr) v = r.f64();
        } else {
            throw std::runtime_error("reliability table: unknown trailer section");
        }
    }
    return t;
}

void write_table(const ReliabilityTable& table, const std::filesystem::path& path) {
    auto bytes = serialize_table(table);
    // Write-then-rename so a concurrent reader never sees a partial file.
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

ReliabilityTable read_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_table(bytes);
}

uint64_t table_digest(const ReliabilityTable& table) { return fnv1a64(serialize_table(table)); }

void write_table_csv(const ReliabilityTable& t, std::ostream& out) {
    out << "index,monomial,log2_z,stderr\n";
    char buf[96];
    for (size_t a = 0; a < t.size(); ++a) {
        double se = t.log2_stderr.empty() ? 0.0 : std::exp2(t.log2_stderr[a]);
        std::snprintf(buf, sizeof buf, ",%.17g,%.6g\n", t.log2_z[a], se);
        out << a << ',' << to_string(monomial_from_channel_index(static_cast<uint32_t>(a), t.n)) << buf;
    }
}

ReliabilityTable compute_table(const TableRequest& req, int threads) {
    switch (req.method) {
        case ReliabilityMethod::exact_bec: return bec_reliabilities(req.p, req.n);
        case ReliabilityMethod::monte_carlo_bsc:
            return mc_bsc_reliabilities(req.p, req.n, req.samples, req.seed, threads);
        case ReliabilityMethod::uniform: return uniform_reliabilities(req.n);
    }
    throw std::invalid_argument("unknown reliability method");
}

std::string cache_file_name(const TableRequest& req) {
    char buf[160];
    if (req.method == ReliabilityMethod::monte_carlo_bsc) {
        std::snprintf(buf, sizeof buf, "bsc_p%.12g_n%d_s%llu_seed%llu.prt", req.p, req.n,
                      static_cast<unsigned long long>(req.samples), static_cast<unsigned long long>(req.seed));
    } else if (req.method == ReliabilityMethod::exact_bec) {
        std::snprintf(buf, sizeof buf, "bec_p%.12g_n%d.prt", req.p, req.n);
    } else {
        std::snprintf(buf, sizeof buf, "uniform_n%d.prt", req.n);
    }
    return buf;
}

std::optional<std::filesystem::path> resolve_cache_dir(const std::string& explicit_dir) {
    if (!explicit_dir.empty()) return std::filesystem::path(explicit_dir);
    if (const char* env = std::getenv("POLAR_CACHE_DIR"); env && *env) return std::filesystem::path(env);
    return std::nullopt;
}

namespace {

bool matches(const ReliabilityTable& t, const TableRequest& req) {
    if (t.method != req.method || t.n != req.n) return false;
    if (req.method == ReliabilityMethod::uniform) return true;
    if (!t.channel || t.channel->p() != req.p) return false;
    if (req.method == ReliabilityMethod::monte_carlo_bsc) return t.samples == req.samples && t.seed == req.seed;
    return true;
}

}  // namespace

ReliabilityTable load_or_compute_table(const TableRequest& req, const std::optional<std::filesystem::path>& cache_dir,
                                       int threads) {
    if (!cache_dir) return compute_table(req, threads);
    auto path = *cache_dir / cache_file_name(req);
    if (std::filesystem::exists(path)) {
        try {
            auto t = read_table(path);
            if (matches(t, req)) return t;
            std::cerr << "warning: cached table " << path << " does not match its key; rebuilding\n";
        } catch (const std::exception& e) {
            std::cerr << "warning: cached table " << path << " unreadable (" << e.what() << "); rebuilding\n";
        }
    }
    auto t = compute_table(req, threads);
    std::filesystem::create_directories(*cache_dir);
    write_table(t, path);
    return t;
}

}  // namespace polartri
