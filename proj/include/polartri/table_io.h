#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polartri/reliability.h"

namespace polartri {

// Binary layout, little endian:
//   "PRT1" | u32 n | u32 method | u64 samples | u64 seed | 2^n f64 log2 Z
// followed by optional tagged trailers, each a u32 tag then its payload:
//   "CHNP" f64 p            channel parameter (kind follows from method)
//   "SERR" 2^n f64          log2 standard errors
std::vector<uint8_t> serialize_table(const ReliabilityTable& table);
ReliabilityTable deserialize_table(const std::vector<uint8_t>& bytes);

void write_table(const ReliabilityTable& table, const std::filesystem::path& path);
ReliabilityTable read_table(const std::filesystem::path& path);

// FNV-1a of the serialized bytes.
uint64_t table_digest(const ReliabilityTable& table);

// Columns index,monomial,log2_z,stderr; stderr is the linear standard error (0 for exact).
void write_table_csv(const ReliabilityTable& table, std::ostream& out);

struct TableRequest {
    ReliabilityMethod method = ReliabilityMethod::exact_bec;
    double p = 0.0;
    int n = 0;
    uint64_t samples = 0;  // Monte Carlo only
    uint64_t seed = 0;     // Monte Carlo only
};

// Computes a table without touching the cache.
ReliabilityTable compute_table(const TableRequest& req, int threads = 0);

// File name that encodes the cache key (kind, p, n, samples, seed).
std::string cache_file_name(const TableRequest& req);

// Cache directory: explicit argument, else $POLAR_CACHE_DIR, else none.
std::optional<std::filesystem::path> resolve_cache_dir(const std::string& explicit_dir);

// Loads from the cache when a matching table is present, otherwise computes and stores it.
// Unreadable or mismatched files are rebuilt with a warning on stderr.
ReliabilityTable load_or_compute_table(const TableRequest& req, const std::optional<std::filesystem::path>& cache_dir,
                                       int threads = 0);

}  // namespace polartri
