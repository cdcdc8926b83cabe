// End-to-end acceptance checks. Each criterion prints one PASS/FAIL
// line; the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "regen/codec.hpp"
#include "regen/faultlab.hpp"
#include "regen/format.hpp"
#include "regen/geometry.hpp"
#include "regen/pipeline.hpp"
#include "regen/reliability.hpp"
#include "reference_impl.hpp"
#include "test_util.hpp"

using namespace regen;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
    if (!condition)
        throw Failure(message);
}

std::uint64_t mix(std::uint64_t& state) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
}

// 1. Wire-format golden vectors.
std::string check_format_golden() {
    const std::array<std::uint8_t, 11> golden = {0x52, 0x45, 0x47, 0x45, 0x4E, 0x00,
                                                 0x01, 0x00, 0x40, 0x00, 0x14};
    require(encode_header({1, 64, 20}) == golden, "header bytes for (v1, 64, 20) differ");

    testutil::TempDir tmp("acc-format");
    const auto archive = tmp / "archive.bin";
    write_random_file(archive, 1048576, 2024);
    const auto result = generate(archive, 10, 64);
    const auto size = std::filesystem::file_size(result.regen_path);
    require(size == 137648,
            "regen file is " + std::to_string(size) + " bytes, expected 137648");
    return "header bytes and 1 MiB regen size exact";
}

// 2. Collision probability grid, exact printed decimals.
std::string check_collision_grid() {
    const std::pair<std::pair<std::uint32_t, std::uint32_t>, const char*> rows[] = {
        {{5, 8}, "0.12109375"},
        {{5, 16}, "0.0004730224609375"},
        {{10, 16}, "0.0156097412109375"},
        {{15, 16}, "0.4999847412109375"},
        {{15, 32}, "0.0000076291617006"},
        {{20, 32}, "0.0002441403921694"},
        {{25, 32}, "0.0078124997671694"},
        {{26, 32}, "0.0156249997671694"},
        {{30, 32}, "0.2499999997671694"},
    };
    for (const auto& [params, printed] : rows) {
        const std::string got = format_probability(collision_probability(params.first, params.second));
        require(got == printed, "(" + std::to_string(params.first) + ", " +
                                    std::to_string(params.second) + ") printed " + got +
                                    ", expected " + printed);
    }
    return "all nine rows exact";
}

// 3. Recovery prediction grid within 1e-6.
std::string check_prediction_grid() {
    const std::pair<ReliabilityParams, double> rows[] = {
        {{8'000'000, 2, 15625, 16, 1000}, 0.8811824},
        {{8'000'000, 2, 7813, 16, 1000}, 0.8796356},
        {{8'000'000, 5, 15625, 16, 1000}, 0.7280075},
        {{8'000'000, 5, 7813, 16, 1000}, 0.7232780},
        {{8'000'000, 10, 15625, 16, 1000}, 0.5269373},
        {{8'000'000, 10, 7813, 16, 1000}, 0.5136633},
        {{8'000'000, 20, 15625, 16, 1000}, 0.2647691},
        {{8'000'000, 20, 7813, 16, 1000}, 0.2118513},
    };
    for (const auto& [params, expected] : rows) {
        const double got = predict_reliability(params).recovery;
        require(std::abs(got - expected) < 1e-6,
                "p=" + std::to_string(params.parity_blocks) +
                    " c=" + std::to_string(params.checksum_blocks) + " gave " +
                    std::to_string(got) + ", expected " + std::to_string(expected));
    }
    return "all eight rows within 1e-6";
}

// 4. Redundant size grid, exact integers.
std::string check_size_grid() {
    const std::pair<ReliabilityParams, std::uint64_t> rows[] = {
        {{8'000'000, 2, 15625, 16, 0}, 4'250'000},
        {{8'000'000, 2, 7813, 16, 0}, 4'125'008},
        {{8'000'000, 5, 15625, 16, 0}, 1'850'000},
        {{8'000'000, 5, 7813, 16, 0}, 1'725'008},
        {{8'000'000, 10, 15625, 16, 0}, 1'050'000},
        {{8'000'000, 10, 7813, 16, 0}, 925'008},
        {{8'000'000, 20, 15625, 16, 0}, 650'000},
        {{8'000'000, 20, 7813, 16, 0}, 525'008},
    };
    for (const auto& [params, expected] : rows) {
        const auto got = redundant_size_bits(params.data_bits, params.parity_blocks,
                                             params.checksum_blocks, params.checksum_bits);
        require(got == expected, "p=" + std::to_string(params.parity_blocks) +
                                     " c=" + std::to_string(params.checksum_blocks) +
                                     " gave " + std::to_string(got));
    }
    return "all eight rows exact";
}

// 5. Single-bit round-trip repair across 200 randomized configurations.
std::string check_single_bit_roundtrip() {
    std::uint64_t state = 0x082efa98ec4e6c89ull;
    const std::uint32_t block_sizes[] = {16, 32, 64, 128};
    for (int round = 0; round < 200; ++round) {
        mix(state);
        const std::uint64_t size = 1024 + state % (4 * 1048576 - 1024);
        const std::uint32_t percent = 5 + static_cast<std::uint32_t>((state >> 33) % 46);
        const std::uint32_t cbl = block_sizes[(state >> 13) % 4];

        testutil::TempDir tmp("acc-roundtrip");
        const auto archive = tmp / "archive.bin";
        write_random_file(archive, size, state);
        const auto gen = generate(archive, percent, cbl);

        // Flip inside the parity-covered extent; trailing remainder
        // bytes carry digest coverage only.
        const std::uint64_t covered_bits =
            gen.plan.parity_blocks * gen.plan.parity_block_len * 8;
        testutil::flip_file_bit(archive, mix(state) % covered_bits);

        const auto report = regenerate(archive);
        const bool ok = report.outcome == RecoveryOutcome::Repaired &&
                        verify(archive) == VerifyResult::Match;
        require(ok, "case " + std::to_string(round) + " (size " + std::to_string(size) +
                        ", " + std::to_string(percent) + "%, cbl " + std::to_string(cbl) +
                        ") was not repaired");
    }
    return "200/200 repaired";
}

// 6. Sector-style erasure on a 10 MiB archive.
std::string check_sector_erasure() {
    testutil::TempDir tmp("acc-sector");
    const auto archive = tmp / "archive.bin";
    write_random_file(archive, 10 * 1048576, 31337);
    generate(archive, 5, 64);

    zero_region(archive, 0, 4096);
    require(verify(archive) == VerifyResult::Mismatch, "erasure went undetected");

    const auto report = regenerate(archive);
    require(report.outcome == RecoveryOutcome::Repaired, "outcome is not repaired");
    require(verify(archive) == VerifyResult::Match, "digest still differs after repair");
    require(report.failed_block_indexes.empty(), "blocks were reported failed");
    require(report.corrections_found == 64,
            "expected 64 corrections, found " + std::to_string(report.corrections_found));
    // attempts >= 1 per correction, so equality means exactly one each.
    require(report.combinations_tried == report.corrections_found,
            "corrections needed more than one combination attempt");
    return "64 blocks restored, one attempt each";
}

// 7. Burst-error recovery rates at 1 MiB.
std::string check_burst_rates() {
    BenchConfig config;
    config.file_size = 1 << 20;
    config.checksum_block_len = 64;
    config.trials = 100;
    config.master_seed = 7001;
    config.fault.kind = FaultKind::BurstErrors;

    config.parity_percent = 10;
    config.fault.error_bits = 1000;
    config.fault.bursts = 10;
    const auto ten = run_benchmark(config);
    require(!ten.aborted, "benchmark aborted: " + ten.error_message);
    require(ten.rate >= 0.90, "n=1000 b=10 at 10% recovered " + std::to_string(ten.rate) +
                                  ", floor is 0.90");

    config.parity_percent = 5;
    config.fault.bursts = 40;
    config.master_seed = 7002;
    const auto forty = run_benchmark(config);
    require(!forty.aborted, "benchmark aborted: " + forty.error_message);
    require(std::abs(forty.rate - 0.34) <= 0.15,
            "n=1000 b=40 at 5% recovered " + std::to_string(forty.rate) +
                ", expected 0.34 +/- 0.15");

    std::ostringstream out;
    out << "rates " << ten.rate << " (floor 0.90) and " << forty.rate << " (0.34 +/- 0.15)";
    return out.str();
}

// 8. Bit-error recovery rates at 1 MiB, bounded by the analytical model.
std::string check_bit_rates() {
    BenchConfig config;
    config.file_size = 1 << 20;
    config.parity_percent = 10;
    config.checksum_block_len = 64;
    config.trials = 100;
    config.master_seed = 8001;
    config.fault.kind = FaultKind::BitErrors;

    config.fault.error_bits = 1000;
    const auto thousand = run_benchmark(config);
    require(!thousand.aborted, "benchmark aborted: " + thousand.error_message);
    require(std::abs(thousand.rate - 0.49) <= 0.12,
            "n=1000 recovered " + std::to_string(thousand.rate) + ", expected 0.49 +/- 0.12");

    const double model = predict_reliability({8'000'000, 10, 15625, 16, 1000}).recovery;
    require(thousand.rate <= model + 0.05,
            "n=1000 recovered " + std::to_string(thousand.rate) +
                ", above the stated-overestimate bound " + std::to_string(model + 0.05));

    config.fault.error_bits = 250;
    config.master_seed = 8002;
    const auto few = run_benchmark(config);
    require(!few.aborted, "benchmark aborted: " + few.error_message);
    require(few.rate >= 0.85,
            "n=250 recovered " + std::to_string(few.rate) + ", floor is 0.85");

    std::ostringstream out;
    out << "rates " << thousand.rate << " (0.49 +/- 0.12, <= " << model + 0.05 << ") and "
        << few.rate << " (floor 0.85)";
    return out.str();
}

// 9. Equivalence with the brute-force reference recovery on tiny inputs.
std::string check_oracle_equivalence() {
    std::uint64_t state = 0xbe5466cf34e90c6cull;
    const std::uint32_t percents[] = {25, 50, 100};
    const std::uint32_t block_sizes[] = {4, 8, 16};
    for (int round = 0; round < 1000; ++round) {
        mix(state);
        const std::uint64_t size = 32 + state % 225;
        const std::uint32_t percent = percents[(state >> 23) % 3];
        const std::uint32_t cbl = block_sizes[(state >> 29) % 3];
        const int errors = 1 + static_cast<int>((state >> 17) % 3);

        testutil::TempDir tmp("acc-oracle");
        const auto archive = tmp / "archive.bin";
        write_random_file(archive, size, state);
        generate(archive, percent, cbl);
        const auto regen_bytes = testutil::read_file(regen_path_for(archive));

        auto corrupted = testutil::read_file(archive);
        for (int e = 0; e < errors; ++e) {
            mix(state);
            corrupted[(state % (size * 8)) / 8] ^=
                static_cast<std::uint8_t>(1u << (state % 8));
        }
        testutil::write_file(archive, corrupted);

        const auto expected = reference::recover(corrupted, regen_bytes);
        regenerate(archive, {std::numeric_limits<std::uint64_t>::max()});
        require(testutil::read_file(archive) == expected.data,
                "case " + std::to_string(round) + " (size " + std::to_string(size) + ", " +
                    std::to_string(percent) + "%, cbl " + std::to_string(cbl) + ", " +
                    std::to_string(errors) + " errors) diverged from the reference");
    }
    return "1000/1000 byte-identical with the reference";
}

// 10. Parity collision at one block index is detected and vetoed.
std::string check_parity_collision_veto() {
    testutil::TempDir tmp("acc-veto");
    const auto archive = tmp / "archive.bin";
    write_random_file(archive, 1024, 55);
    generate(archive, 50, 64); // two parity blocks of 512 bytes

    const auto plan = plan_geometry(1024, 50, 64);
    const std::uint64_t j = 3, bit = 100;
    auto data = testutil::read_file(archive);
    for (std::uint32_t i = 0; i < 2; ++i) {
        const std::uint64_t position = plan.block_offset(i, j) * 8 + bit;
        data[position / 8] ^= static_cast<std::uint8_t>(1u << (position % 8));
    }
    testutil::write_file(archive, data);

    const auto report = regenerate(archive);
    require(report.outcome == RecoveryOutcome::PartialFailure, "outcome is not partial-failure");
    require(report.failed_block_indexes == std::set<std::uint64_t>{j},
            "failed indexes do not name the corrupted pairing blocks");
    require(report.corrections_applied == 0, "corrections were applied");
    require(testutil::read_file(archive) == data, "bytes were written to the archive");
    return "partial-failure, blocks vetoed, archive untouched";
}

} // namespace

int main() {
    const std::pair<const char*, std::function<std::string()>> criteria[] = {
        {"format golden vectors", check_format_golden},
        {"checksum collision probability grid", check_collision_grid},
        {"recovery prediction grid", check_prediction_grid},
        {"redundant size grid", check_size_grid},
        {"single-bit round-trip repair (200 cases)", check_single_bit_roundtrip},
        {"sector erasure recovery (10 MiB)", check_sector_erasure},
        {"burst benchmark rates (100 trials each)", check_burst_rates},
        {"bit-error benchmark rates (100 trials each)", check_bit_rates},
        {"brute-force reference equivalence (1000 cases)", check_oracle_equivalence},
        {"parity collision veto", check_parity_collision_veto},
    };

    int failures = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        const auto started = std::chrono::steady_clock::now();
        try {
            const std::string detail = run();
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                    .count();
            std::printf("[PASS] %2d %-45s %s (%.1fs)\n", index, name, detail.c_str(), seconds);
        } catch (const std::exception& e) {
            ++failures;
            std::printf("[FAIL] %2d %-45s %s\n", index, name, e.what());
        }
        std::fflush(stdout);
    }

    if (failures > 0)
        std::printf("%d of 10 criteria failed\n", failures);
    else
        std::printf("all 10 criteria passed\n");
    return failures == 0 ? 0 : 1;
}
