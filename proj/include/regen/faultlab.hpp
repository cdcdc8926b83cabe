#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "regen/pipeline.hpp"

namespace regen {

enum class FaultKind { BitErrors, BurstErrors, ZeroRegion };

struct FaultSpec {
    FaultKind kind = FaultKind::BitErrors;
    std::uint64_t error_bits = 0; // n, for bit and burst faults
    std::uint64_t bursts = 0;     // b, for burst faults
    std::uint64_t offset = 0;     // zero-region start, bytes
    std::uint64_t length = 0;     // zero-region length, bytes
    std::uint64_t seed = 0;
};

// Flips n distinct uniformly chosen bits; returns the flipped positions
// in ascending order. Fully determined by (file, n, seed).
std::vector<std::uint64_t> inject_bit_errors(const std::filesystem::path& path,
                                             std::uint64_t n, std::uint64_t seed);

struct Burst {
    std::uint64_t start_bit = 0;
    std::uint64_t length = 0;
};

// b non-overlapping contiguous runs of flipped bits. Each run covers
// floor(n/b) bits; the last run also absorbs the n mod b remainder.
// Starts are uniform with overlap rejection; exhausting the retry
// budget raises a placement failure.
std::vector<Burst> inject_burst_errors(const std::filesystem::path& path, std::uint64_t n,
                                       std::uint64_t b, std::uint64_t seed);

// Overwrites [offset, offset + length) with zero bytes in place.
void zero_region(const std::filesystem::path& path, std::uint64_t offset, std::uint64_t length);

void apply_fault(const std::filesystem::path& path, const FaultSpec& fault);

struct BenchConfig {
    std::uint64_t file_size = 1 << 20;
    std::uint32_t parity_percent = 5;
    std::uint32_t checksum_block_len = 64;
    FaultSpec fault;               // template; per-trial seeds are derived
    std::uint64_t trials = 100;
    std::uint64_t master_seed = 1;
    std::uint64_t attempt_cap = kDefaultAttemptCap;
    std::filesystem::path work_dir; // empty: $REGEN_BENCH_TMPDIR or the system temp dir
    bool keep_files = false;
};

struct BenchResult {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    bool rate_defined = false;
    double rate = 0.0; // NaN when trials == 0
    double mean_combinations_tried = 0.0;
    double wall_seconds = 0.0;
    bool aborted = false; // an I/O failure cut the run short
    std::string error_message;
};

// Per trial: synthesize a seeded random file, generate redundancy, copy,
// inject the fault, regenerate, verify. Success means the digest matches.
BenchResult run_benchmark(const BenchConfig& config);

std::vector<std::uint8_t> random_bytes(std::uint64_t size, std::uint64_t seed);
void write_random_file(const std::filesystem::path& path, std::uint64_t size, std::uint64_t seed);

std::string bench_csv_header();
std::string bench_csv_row(const BenchConfig& config, const BenchResult& result);
std::string bench_summary(const BenchConfig& config, const BenchResult& result);

} // namespace regen
