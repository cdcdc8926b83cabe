#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "regen/codec.hpp"
#include "regen/errors.hpp"
#include "regen/faultlab.hpp"
#include "regen/format.hpp"
#include "regen/pipeline.hpp"
#include "regen/reliability.hpp"

namespace {

using nlohmann::json;

// 0 success/match/repaired; 1 mismatch or partial failure; 2 usage; 3 I/O or format.
constexpr int kExitOk = 0;
constexpr int kExitCorrupt = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

constexpr std::uint64_t kMaxAttemptCap = 1u << 20;

constexpr const char* kModelCaveat =
    "note: the analytical figure is an overestimate; checksum imperfections and "
    "uneven error placement lower real recovery rates";

int map_error(const regen::Error& error) {
    return error.kind() == regen::ErrorKind::InvalidArgument ? kExitUsage : kExitIo;
}

const char* outcome_name(regen::RecoveryOutcome outcome) {
    switch (outcome) {
    case regen::RecoveryOutcome::Clean: return "clean";
    case regen::RecoveryOutcome::Repaired: return "repaired";
    case regen::RecoveryOutcome::PartialFailure: return "partial-failure";
    }
    return "?";
}

struct GenerateArgs {
    std::string archive;
    std::uint32_t parity = 5;
    std::uint32_t block = 64;
    bool force = false;
    bool quiet = false;
    bool as_json = false;
};

int run_generate(const GenerateArgs& args) {
    const std::filesystem::path archive = args.archive;
    const auto sidecar = regen::sidecar_path_for(archive);
    const auto regen_file = regen::regen_path_for(archive);
    if (!args.force &&
        (std::filesystem::exists(sidecar) || std::filesystem::exists(regen_file))) {
        std::cerr << "error: output files already exist; pass --force to overwrite\n";
        return kExitIo;
    }
    if (args.block > 256 && !args.quiet)
        std::cerr << "warning: checksum blocks over 256 bytes weaken Fletcher-16; "
                     "consider 64-256\n";

    const auto result = regen::generate(archive, args.parity, args.block);
    if (args.as_json) {
        json out{{"sidecar", result.sidecar_path.string()},
                 {"regen", result.regen_path.string()},
                 {"sha256", result.digest},
                 {"parity_blocks", result.plan.parity_blocks},
                 {"parity_block_len", result.plan.parity_block_len},
                 {"checksum_blocks", result.plan.checksum_blocks},
                 {"tail_len", result.plan.tail_len}};
        std::cout << out.dump() << '\n';
    } else if (!args.quiet) {
        std::cout << "wrote " << result.sidecar_path.string() << '\n'
                  << "wrote " << result.regen_path.string() << " ("
                  << result.plan.parity_blocks << " parity blocks of "
                  << result.plan.parity_block_len << " bytes, "
                  << result.plan.checksum_blocks << " checksum blocks each)\n";
        if (result.plan.tail_len > 0)
            std::cout << "note: the trailing " << result.plan.tail_len
                      << " bytes are covered by the digest only\n";
    }
    return kExitOk;
}

int run_verify(const std::string& path, bool quiet, bool as_json) {
    const auto result = regen::verify(path);
    const bool match = result == regen::VerifyResult::Match;
    if (as_json) {
        std::cout << json{{"archive", path}, {"match", match}}.dump() << '\n';
    } else if (!quiet) {
        if (match)
            std::cout << path << ": hashes consistent\n";
        else
            std::cout << path << ": hash mismatch, the archive file is corrupt\n";
    }
    return match ? kExitOk : kExitCorrupt;
}

int run_regenerate(const std::string& path, std::uint64_t cap, bool quiet, bool as_json) {
    const auto report = regen::regenerate(path, {cap});
    if (as_json) {
        json out{{"archive", path},
                 {"outcome", outcome_name(report.outcome)},
                 {"corrections_found", report.corrections_found},
                 {"corrections_applied", report.corrections_applied},
                 {"corrections_skipped", report.corrections_skipped},
                 {"failed_block_indexes", report.failed_block_indexes},
                 {"combinations_tried", report.combinations_tried},
                 {"digest_checked", report.digest_checked}};
        std::cout << out.dump() << '\n';
    } else if (!quiet) {
        std::cout << path << ": " << outcome_name(report.outcome) << '\n'
                  << "  corrections found:   " << report.corrections_found << '\n'
                  << "  corrections applied: " << report.corrections_applied << '\n'
                  << "  corrections skipped: " << report.corrections_skipped << '\n'
                  << "  failed block indexes: " << report.failed_block_indexes.size() << '\n'
                  << "  combinations tried:  " << report.combinations_tried << '\n';
        if (!report.digest_checked)
            std::cout << "  (no usable digest sidecar; outcome is structural)\n";
    }
    return report.outcome == regen::RecoveryOutcome::PartialFailure ? kExitCorrupt : kExitOk;
}

struct PredictArgs {
    std::uint64_t data_bits = 8'000'000;
    std::uint32_t parity_blocks = 10;
    std::uint64_t checksum_blocks = 15625;
    std::uint32_t checksum_bits = 16;
    std::uint64_t errors = 1000;
    std::string denominator = "length";
    std::string table;
    bool csv = false;
    bool as_json = false;
};

int run_predict(const PredictArgs& args) {
    const auto format = args.csv ? regen::TableFormat::Csv : regen::TableFormat::Text;
    if (args.table == "collision") {
        const auto rows = regen::default_collision_rows();
        std::cout << regen::emit_collision_table(rows, format);
        return kExitOk;
    }
    if (args.table == "prediction") {
        const auto rows = regen::default_prediction_rows();
        std::cout << regen::emit_prediction_table(rows, format);
        std::cout << kModelCaveat << '\n';
        return kExitOk;
    }
    if (args.table == "size") {
        const auto rows = regen::default_prediction_rows();
        std::cout << regen::emit_redundancy_table(rows, format);
        return kExitOk;
    }
    if (!args.table.empty()) {
        std::cerr << "error: unknown table '" << args.table
                  << "' (expected collision, prediction or size)\n";
        return kExitUsage;
    }

    const auto denominator = args.denominator == "count"
                                 ? regen::ParityDenominator::BlockCount
                                 : regen::ParityDenominator::BlockLengthBits;
    const regen::ReliabilityParams params{args.data_bits, args.parity_blocks,
                                          args.checksum_blocks, args.checksum_bits,
                                          args.errors};
    const auto prediction = regen::predict_reliability(params, denominator);
    const auto redundant = regen::redundant_size_bits(args.data_bits, args.parity_blocks,
                                                      args.checksum_blocks, args.checksum_bits);
    if (args.as_json) {
        json out{{"checksum_collision", prediction.checksum_collision},
                 {"parity_collision", prediction.parity_collision},
                 {"recovery", prediction.recovery},
                 {"recovery_clamped", prediction.clamped_recovery()},
                 {"parity_saturated", prediction.parity_saturated},
                 {"redundant_bits", redundant},
                 {"caveat", kModelCaveat}};
        std::cout << out.dump() << '\n';
        return kExitOk;
    }

    char line[64];
    std::snprintf(line, sizeof line, "%.7f", prediction.clamped_recovery());
    std::cout << "checksum collision: "
              << regen::format_probability(prediction.clamped_checksum_collision()) << '\n'
              << "parity collision:   "
              << regen::format_probability(prediction.clamped_parity_collision()) << '\n'
              << "recovery:           " << line << '\n'
              << "redundant bits:     " << redundant << '\n';
    if (prediction.parity_saturated)
        std::cout << "(parity product saturated: errors exceed the available indexes)\n";
    std::cout << kModelCaveat << '\n';
    return kExitOk;
}

struct BenchArgs {
    std::string fault = "bit";
    std::uint64_t size = 1 << 20;
    std::uint32_t parity = 10;
    std::uint32_t block = 64;
    std::uint64_t errors = 1000;
    std::uint64_t bursts = 10;
    std::uint64_t offset = 0;
    std::uint64_t length = 4096;
    std::uint64_t trials = 100;
    std::uint64_t seed = 1;
    std::uint64_t cap = regen::kDefaultAttemptCap;
    std::string suite;
    bool slow = false;
    bool csv = false;
    bool keep = false;
};

regen::BenchConfig single_config(const BenchArgs& args) {
    regen::BenchConfig config;
    config.file_size = args.size;
    config.parity_percent = args.parity;
    config.checksum_block_len = args.block;
    config.trials = args.trials;
    config.master_seed = args.seed;
    config.attempt_cap = args.cap;
    config.keep_files = args.keep;
    if (args.fault == "bit") {
        config.fault = {regen::FaultKind::BitErrors, args.errors, 0, 0, 0, 0};
    } else if (args.fault == "burst") {
        config.fault = {regen::FaultKind::BurstErrors, args.errors, args.bursts, 0, 0, 0};
    } else if (args.fault == "zero") {
        config.fault = {regen::FaultKind::ZeroRegion, 0, 0, args.offset, args.length, 0};
    } else {
        regen::raise(regen::ErrorKind::InvalidArgument,
                     "unknown fault kind '" + args.fault + "'");
    }
    return config;
}

std::vector<regen::BenchConfig> suite_configs(const BenchArgs& args) {
    using regen::BenchConfig;
    using regen::FaultKind;

    const std::uint64_t mib = 1 << 20;
    const std::uint64_t gib = 1ull << 30;
    std::vector<BenchConfig> configs;

    auto push = [&](std::uint64_t file_size, FaultKind kind, std::uint64_t n,
                    std::uint64_t b, std::uint32_t parity, std::uint32_t block,
                    std::uint64_t trials) {
        BenchConfig config;
        config.file_size = file_size;
        config.parity_percent = parity;
        config.checksum_block_len = block;
        config.trials = trials;
        config.master_seed = args.seed;
        config.attempt_cap = args.cap;
        config.keep_files = args.keep;
        config.fault.kind = kind;
        config.fault.error_bits = n;
        config.fault.bursts = b;
        if (args.trials != 100) // explicit override wins
            config.trials = args.trials;
        configs.push_back(config);
    };

    if (args.suite == "burst") {
        push(mib, FaultKind::BurstErrors, 1000, 10, 10, 32, 100);
        push(mib, FaultKind::BurstErrors, 1000, 10, 10, 64, 100);
        push(mib, FaultKind::BurstErrors, 1000, 10, 10, 128, 100);
        push(mib, FaultKind::BurstErrors, 1000, 10, 5, 64, 100);
        push(mib, FaultKind::BurstErrors, 1000, 20, 5, 64, 100);
        push(mib, FaultKind::BurstErrors, 1000, 40, 5, 64, 100);
        push(mib, FaultKind::BurstErrors, 10000, 10, 5, 64, 100);
        push(mib, FaultKind::BurstErrors, 100000, 1, 10, 64, 100);
        push(mib, FaultKind::BurstErrors, 100000, 2, 10, 64, 100);
        push(mib, FaultKind::BurstErrors, 1000000, 1, 50, 64, 100);
        push(mib, FaultKind::BurstErrors, 1000000, 2, 50, 64, 100);
        if (args.slow) {
            push(gib, FaultKind::BurstErrors, 1000000, 10, 10, 64, 10);
            push(gib, FaultKind::BurstErrors, 1000000, 10, 5, 128, 10);
            push(gib, FaultKind::BurstErrors, 1000000, 20, 5, 128, 10);
            push(gib, FaultKind::BurstErrors, 10000000, 10, 10, 128, 10);
        }
    } else if (args.suite == "bit") {
        push(mib, FaultKind::BitErrors, 1000, 0, 10, 64, 100);
        push(mib, FaultKind::BitErrors, 1000, 0, 50, 64, 100);
        push(mib, FaultKind::BitErrors, 500, 0, 10, 64, 100);
        push(mib, FaultKind::BitErrors, 500, 0, 5, 64, 100);
        push(mib, FaultKind::BitErrors, 250, 0, 10, 64, 100);
        push(mib, FaultKind::BitErrors, 250, 0, 5, 64, 100);
        if (args.slow) {
            push(gib, FaultKind::BitErrors, 1000000, 0, 10, 64, 10);
            push(gib, FaultKind::BitErrors, 10000, 0, 10, 128, 10);
            push(gib, FaultKind::BitErrors, 10000, 0, 5, 128, 10);
        }
    } else {
        regen::raise(regen::ErrorKind::InvalidArgument,
                     "unknown suite '" + args.suite + "' (expected burst or bit)");
    }
    return configs;
}

int run_bench(const BenchArgs& args) {
    if (args.cap == 0 || args.cap > kMaxAttemptCap) {
        std::cerr << "error: --cap must be in 1.." << kMaxAttemptCap << '\n';
        return kExitUsage;
    }

    std::vector<regen::BenchConfig> configs;
    if (!args.suite.empty())
        configs = suite_configs(args);
    else
        configs.push_back(single_config(args));

    if (args.csv)
        std::cout << regen::bench_csv_header();

    bool aborted = false;
    for (const auto& config : configs) {
        const auto result = regen::run_benchmark(config);
        if (args.csv)
            std::cout << regen::bench_csv_row(config, result) << std::flush;
        else
            std::cout << regen::bench_summary(config, result) << '\n' << std::flush;
        aborted = aborted || result.aborted;
    }
    return aborted ? kExitIo : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"regen: partial redundancy data for archive files"};
    app.require_subcommand(1);

    GenerateArgs generate_args;
    auto* cmd_generate =
        app.add_subcommand("generate", "write digest sidecar and redundancy file");
    cmd_generate->add_option("archive", generate_args.archive, "archive file")->required();
    cmd_generate->add_option("--parity", generate_args.parity,
                             "parity data as a percentage of the archive (1-100)")
        ->capture_default_str();
    cmd_generate->add_option("--block", generate_args.block, "checksum block length in bytes")
        ->capture_default_str();
    cmd_generate->add_flag("--force", generate_args.force, "overwrite existing outputs");
    cmd_generate->add_flag("--quiet", generate_args.quiet, "suppress normal output");
    cmd_generate->add_flag("--json", generate_args.as_json, "machine-readable output");

    std::string verify_archive;
    bool verify_quiet = false, verify_json = false;
    auto* cmd_verify = app.add_subcommand("verify", "compare the archive against its digest");
    cmd_verify->add_option("archive", verify_archive, "archive file")->required();
    cmd_verify->add_flag("--quiet", verify_quiet, "suppress normal output");
    cmd_verify->add_flag("--json", verify_json, "machine-readable output");

    std::string regen_archive;
    std::uint64_t regen_cap = regen::kDefaultAttemptCap;
    bool regen_quiet = false, regen_json = false;
    auto* cmd_regenerate =
        app.add_subcommand("regenerate", "repair the archive from its redundancy file");
    cmd_regenerate->add_option("archive", regen_archive, "archive file")->required();
    cmd_regenerate->add_option("--cap", regen_cap, "combination attempts per block")
        ->capture_default_str();
    cmd_regenerate->add_flag("--quiet", regen_quiet, "suppress normal output");
    cmd_regenerate->add_flag("--json", regen_json, "machine-readable output");

    PredictArgs predict_args;
    auto* cmd_predict =
        app.add_subcommand("predict", "analytical recovery probability and data sizes");
    cmd_predict->add_option("--data-bits", predict_args.data_bits, "archive size in bits")
        ->capture_default_str();
    cmd_predict->add_option("--parity-blocks", predict_args.parity_blocks, "parity block count")
        ->capture_default_str();
    cmd_predict
        ->add_option("--checksum-blocks", predict_args.checksum_blocks,
                     "total checksum block count")
        ->capture_default_str();
    cmd_predict
        ->add_option("--checksum-bits", predict_args.checksum_bits,
                     "checksum output size (8, 16 or 32)")
        ->capture_default_str();
    cmd_predict->add_option("--errors", predict_args.errors, "bit error count")
        ->capture_default_str();
    cmd_predict
        ->add_option("--denominator", predict_args.denominator,
                     "parity collision slots: length (d/p bits) or count (p)")
        ->capture_default_str();
    cmd_predict->add_option("--table", predict_args.table,
                            "emit a reference grid: collision, prediction or size");
    cmd_predict->add_flag("--csv", predict_args.csv, "CSV instead of aligned text");
    cmd_predict->add_flag("--json", predict_args.as_json, "machine-readable output");

    BenchArgs bench_args;
    auto* cmd_bench = app.add_subcommand("bench", "fault-injection recovery benchmarks");
    cmd_bench->add_option("--fault", bench_args.fault, "bit, burst or zero")
        ->capture_default_str();
    cmd_bench->add_option("--size", bench_args.size, "file size in bytes")
        ->capture_default_str();
    cmd_bench->add_option("--parity", bench_args.parity, "parity percentage")
        ->capture_default_str();
    cmd_bench->add_option("--block", bench_args.block, "checksum block length")
        ->capture_default_str();
    cmd_bench->add_option("--errors", bench_args.errors, "bit error count n")
        ->capture_default_str();
    cmd_bench->add_option("--bursts", bench_args.bursts, "burst count b")
        ->capture_default_str();
    cmd_bench->add_option("--offset", bench_args.offset, "zero-region offset")
        ->capture_default_str();
    cmd_bench->add_option("--length", bench_args.length, "zero-region length")
        ->capture_default_str();
    cmd_bench->add_option("--trials", bench_args.trials, "trials per configuration")
        ->capture_default_str();
    cmd_bench->add_option("--seed", bench_args.seed, "master seed")->capture_default_str();
    cmd_bench->add_option("--cap", bench_args.cap, "combination attempts per block")
        ->capture_default_str();
    cmd_bench->add_option("--suite", bench_args.suite,
                          "run a whole grid: burst or bit (1 MiB rows)");
    cmd_bench->add_flag("--slow", bench_args.slow, "include the 1 GiB rows in a suite");
    cmd_bench->add_flag("--csv", bench_args.csv, "CSV output");
    cmd_bench->add_flag("--keep", bench_args.keep, "keep per-trial work directories");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cmd_generate->parsed())
            return run_generate(generate_args);
        if (cmd_verify->parsed())
            return run_verify(verify_archive, verify_quiet, verify_json);
        if (cmd_regenerate->parsed()) {
            if (regen_cap == 0 || regen_cap > kMaxAttemptCap) {
                std::cerr << "error: --cap must be in 1.." << kMaxAttemptCap << '\n';
                return kExitUsage;
            }
            return run_regenerate(regen_archive, regen_cap, regen_quiet, regen_json);
        }
        if (cmd_predict->parsed())
            return run_predict(predict_args);
        if (cmd_bench->parsed())
            return run_bench(bench_args);
    } catch (const regen::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return map_error(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitUsage;
}
