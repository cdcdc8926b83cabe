#include "regen/faultlab.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "regen/errors.hpp"
#include "regen/format.hpp"

namespace regen {

namespace {

// Self-contained generator so injections and synthesized files replay
// identically on any toolchain.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform value in [0, bound) without modulo bias.
    std::uint64_t bounded(std::uint64_t bound) {
        const std::uint64_t threshold = -bound % bound;
        for (;;) {
            const std::uint64_t value = next();
            if (value >= threshold)
                return value % bound;
        }
    }
};

constexpr int kPlacementRetries = 10000;

std::vector<std::uint8_t> load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(ErrorKind::Io, "cannot open " + path.string());
    in.seekg(0, std::ios::end);
    const std::streamoff end = in.tellg();
    if (end < 0)
        raise(ErrorKind::Io, path.string() + " is not seekable");
    std::vector<std::uint8_t> data(static_cast<std::size_t>(end));
    in.seekg(0, std::ios::beg);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!in && !data.empty())
        raise(ErrorKind::Io, "read failure on " + path.string());
    return data;
}

void store_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        raise(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out)
        raise(ErrorKind::Io, "write failure on " + path.string());
}

void flip_bit(std::span<std::uint8_t> data, std::uint64_t bit) {
    data[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
}

// n distinct values in [0, total); samples the complement when n is
// more than half of the space so dense draws stay cheap.
std::vector<std::uint64_t> sample_distinct(std::uint64_t n, std::uint64_t total,
                                           SplitMix64& rng) {
    const bool invert = n > total / 2;
    const std::uint64_t want = invert ? total - n : n;
    std::unordered_set<std::uint64_t> picked;
    picked.reserve(static_cast<std::size_t>(want) * 2 + 16);
    while (picked.size() < want)
        picked.insert(rng.bounded(total));

    std::vector<std::uint64_t> result;
    result.reserve(static_cast<std::size_t>(n));
    if (invert) {
        for (std::uint64_t bit = 0; bit < total; ++bit)
            if (!picked.contains(bit))
                result.push_back(bit);
    } else {
        result.assign(picked.begin(), picked.end());
        std::sort(result.begin(), result.end());
    }
    return result;
}

std::filesystem::path bench_work_root(const BenchConfig& config) {
    if (!config.work_dir.empty())
        return config.work_dir;
    if (const char* env = std::getenv("REGEN_BENCH_TMPDIR"); env && *env)
        return env;
    return std::filesystem::temp_directory_path();
}

std::string fault_label(const FaultSpec& fault) {
    switch (fault.kind) {
    case FaultKind::BitErrors: return "bit";
    case FaultKind::BurstErrors: return "burst";
    case FaultKind::ZeroRegion: return "zero";
    }
    return "?";
}

} // namespace

std::vector<std::uint64_t> inject_bit_errors(const std::filesystem::path& path,
                                             std::uint64_t n, std::uint64_t seed) {
    std::vector<std::uint8_t> data = load_file(path);
    const std::uint64_t total_bits = static_cast<std::uint64_t>(data.size()) * 8;
    if (n > total_bits)
        raise(ErrorKind::InvalidArgument,
              std::to_string(n) + " bit errors exceed the file's " +
                  std::to_string(total_bits) + " bits");

    SplitMix64 rng(seed);
    std::vector<std::uint64_t> bits = sample_distinct(n, total_bits, rng);
    for (std::uint64_t bit : bits)
        flip_bit(data, bit);
    store_file(path, data);
    return bits;
}

std::vector<Burst> inject_burst_errors(const std::filesystem::path& path, std::uint64_t n,
                                       std::uint64_t b, std::uint64_t seed) {
    if (b == 0 || n < b)
        raise(ErrorKind::InvalidArgument, "burst injection requires n >= b >= 1");

    std::vector<std::uint8_t> data = load_file(path);
    const std::uint64_t total_bits = static_cast<std::uint64_t>(data.size()) * 8;
    if (n > total_bits)
        raise(ErrorKind::InvalidArgument,
              std::to_string(n) + " burst bits exceed the file's " +
                  std::to_string(total_bits) + " bits");

    SplitMix64 rng(seed);
    std::vector<Burst> placed;
    placed.reserve(static_cast<std::size_t>(b));
    for (std::uint64_t run = 0; run < b; ++run) {
        std::uint64_t length = n / b;
        if (run + 1 == b)
            length += n % b;

        bool found = false;
        for (int attempt = 0; attempt < kPlacementRetries && !found; ++attempt) {
            const std::uint64_t start = rng.bounded(total_bits - length + 1);
            const bool overlaps = std::any_of(
                placed.begin(), placed.end(), [&](const Burst& other) {
                    return start < other.start_bit + other.length &&
                           other.start_bit < start + length;
                });
            if (!overlaps) {
                placed.push_back(Burst{start, length});
                found = true;
            }
        }
        if (!found)
            raise(ErrorKind::PlacementFailure,
                  "could not place burst " + std::to_string(run + 1) + " of " +
                      std::to_string(b) + " without overlap");
    }

    for (const Burst& burst : placed)
        for (std::uint64_t bit = 0; bit < burst.length; ++bit)
            flip_bit(data, burst.start_bit + bit);
    store_file(path, data);
    return placed;
}

void zero_region(const std::filesystem::path& path, std::uint64_t offset, std::uint64_t length) {
    const std::uint64_t size = std::filesystem::file_size(path);
    if (offset > size || length > size - offset)
        raise(ErrorKind::InvalidArgument, "zero region exceeds file bounds");
    if (length == 0)
        return;

    std::fstream out(path, std::ios::binary | std::ios::in | std::ios::out);
    if (!out)
        raise(ErrorKind::Io, "cannot open " + path.string() + " for zeroing");
    out.seekp(static_cast<std::streamoff>(offset));
    std::array<char, 64 * 1024> zeros{};
    std::uint64_t remaining = length;
    while (remaining > 0) {
        const auto chunk = static_cast<std::streamsize>(std::min<std::uint64_t>(remaining, zeros.size()));
        out.write(zeros.data(), chunk);
        remaining -= static_cast<std::uint64_t>(chunk);
    }
    if (!out)
        raise(ErrorKind::Io, "write failure on " + path.string());
}

void apply_fault(const std::filesystem::path& path, const FaultSpec& fault) {
    switch (fault.kind) {
    case FaultKind::BitErrors:
        inject_bit_errors(path, fault.error_bits, fault.seed);
        return;
    case FaultKind::BurstErrors:
        inject_burst_errors(path, fault.error_bits, fault.bursts, fault.seed);
        return;
    case FaultKind::ZeroRegion:
        zero_region(path, fault.offset, fault.length);
        return;
    }
    raise(ErrorKind::InvalidArgument, "unknown fault kind");
}

std::vector<std::uint8_t> random_bytes(std::uint64_t size, std::uint64_t seed) {
    std::vector<std::uint8_t> data(static_cast<std::size_t>(size));
    SplitMix64 rng(seed);
    std::size_t i = 0;
    for (; i + 8 <= data.size(); i += 8) {
        const std::uint64_t word = rng.next();
        std::memcpy(data.data() + i, &word, 8);
    }
    if (i < data.size()) {
        const std::uint64_t word = rng.next();
        std::memcpy(data.data() + i, &word, data.size() - i);
    }
    return data;
}

void write_random_file(const std::filesystem::path& path, std::uint64_t size,
                       std::uint64_t seed) {
    const auto data = random_bytes(size, seed);
    store_file(path, data);
}

BenchResult run_benchmark(const BenchConfig& config) {
    BenchResult result;
    result.trials = 0;
    if (config.trials == 0) {
        result.rate = std::numeric_limits<double>::quiet_NaN();
        return result;
    }

    const auto started = std::chrono::steady_clock::now();
    const auto root = bench_work_root(config) /
                      ("regen-bench-" + std::to_string(config.master_seed) + "-" +
                       std::to_string(::getpid()));
    std::filesystem::create_directories(root);

    std::uint64_t total_combinations = 0;
    SplitMix64 seeder(config.master_seed);
    try {
        for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
            const std::uint64_t file_seed = seeder.next();
            const std::uint64_t fault_seed = seeder.next();

            const auto dir = root / ("trial-" + std::to_string(trial));
            std::filesystem::create_directories(dir);
            const auto source = dir / "source.bin";
            const auto target = dir / "target.bin";

            write_random_file(source, config.file_size, file_seed);
            generate(source, config.parity_percent, config.checksum_block_len);

            std::filesystem::copy_file(source, target);
            std::filesystem::copy_file(sidecar_path_for(source), sidecar_path_for(target));
            std::filesystem::copy_file(regen_path_for(source), regen_path_for(target));

            FaultSpec fault = config.fault;
            fault.seed = fault_seed;
            apply_fault(target, fault);

            const RecoveryReport report = regenerate(target, {config.attempt_cap});
            total_combinations += report.combinations_tried;
            if (verify(target) == VerifyResult::Match)
                ++result.successes;
            ++result.trials;

            if (!config.keep_files)
                std::filesystem::remove_all(dir);
        }
    } catch (const std::exception& e) {
        result.aborted = true;
        result.error_message = e.what();
    }

    if (!config.keep_files) {
        std::error_code ec;
        std::filesystem::remove_all(root, ec);
    }

    result.rate_defined = result.trials > 0;
    result.rate = result.rate_defined
                      ? static_cast<double>(result.successes) / static_cast<double>(result.trials)
                      : std::numeric_limits<double>::quiet_NaN();
    result.mean_combinations_tried =
        result.trials > 0 ? static_cast<double>(total_combinations) /
                                static_cast<double>(result.trials)
                          : 0.0;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

std::string bench_csv_header() {
    return "fault,data_size,errors,bursts,offset,length,parity_percent,checksum_block,"
           "successes,trials,rate,mean_combinations,wall_seconds\n";
}

std::string bench_csv_row(const BenchConfig& config, const BenchResult& result) {
    std::ostringstream out;
    out << fault_label(config.fault) << ',' << config.file_size << ',';
    if (config.fault.kind == FaultKind::ZeroRegion)
        out << ",," << config.fault.offset << ',' << config.fault.length << ',';
    else
        out << config.fault.error_bits << ','
            << (config.fault.kind == FaultKind::BurstErrors
                    ? std::to_string(config.fault.bursts)
                    : std::string())
            << ",,,";
    out << config.parity_percent << ',' << config.checksum_block_len << ','
        << result.successes << ',' << result.trials << ',';
    if (result.rate_defined)
        out << result.rate;
    out << ',' << result.mean_combinations_tried << ',' << result.wall_seconds << '\n';
    return out.str();
}

std::string bench_summary(const BenchConfig& config, const BenchResult& result) {
    std::ostringstream out;
    out << fault_label(config.fault) << " fault, " << config.file_size << " bytes, "
        << config.parity_percent << "% parity, " << config.checksum_block_len
        << "-byte checksum blocks: ";
    if (result.rate_defined) {
        out << result.successes << '/' << result.trials << " recovered ("
            << std::lround(result.rate * 100.0) << "%)";
    } else {
        out << "no trials run";
    }
    if (result.aborted)
        out << " [aborted: " << result.error_message << ']';
    return out.str();
}

} // namespace regen
