#include "regen/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include "regen/codec.hpp"
#include "regen/errors.hpp"
#include "regen/format.hpp"

namespace regen {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(ErrorKind::Io, "cannot open " + path.string());
    in.seekg(0, std::ios::end);
    const std::streamoff end = in.tellg();
    if (end < 0)
        raise(ErrorKind::Io, path.string() + " is not seekable");
    const auto size = static_cast<std::uint64_t>(end);
    in.seekg(0, std::ios::beg);
    std::vector<std::uint8_t> data(size);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(size));
    if (!in && size != 0)
        raise(ErrorKind::Io, "read failure on " + path.string());
    return data;
}

std::span<const std::uint8_t> block_span(std::span<const std::uint8_t> archive,
                                         const GeometryPlan& plan, std::uint32_t i,
                                         std::uint64_t j) {
    return archive.subspan(plan.block_offset(i, j), plan.block_len(j));
}

void flip_bits(std::span<std::uint8_t> bytes, std::span<const std::uint32_t> bit_indexes) {
    for (std::uint32_t index : bit_indexes)
        bytes[index / 8] ^= static_cast<std::uint8_t>(1u << (index % 8));
}

} // namespace

GenerateResult generate(const std::filesystem::path& archive, std::uint32_t parity_percent,
                        std::uint32_t checksum_block_len) {
    if (checksum_block_len > 0xffff)
        raise(ErrorKind::InvalidArgument, "checksum block length does not fit the header");

    const std::vector<std::uint8_t> data = read_file(archive);
    const GeometryPlan plan = plan_geometry(data.size(), parity_percent, checksum_block_len);

    GenerateResult result;
    result.plan = plan;
    result.digest = sha256_hex(std::span<const std::uint8_t>(data));
    result.sidecar_path = sidecar_path_for(archive);
    write_sidecar_hash(result.sidecar_path, result.digest);

    RegenArtifact artifact;
    artifact.header.version = kRegenVersion;
    artifact.header.checksum_block_len = static_cast<std::uint16_t>(checksum_block_len);
    artifact.header.parity_blocks = static_cast<std::uint16_t>(plan.parity_blocks);

    artifact.checksums.reserve(plan.total_checksum_blocks());
    for (std::uint32_t i = 0; i < plan.parity_blocks; ++i)
        for (std::uint64_t j = 0; j < plan.checksum_blocks; ++j)
            artifact.checksums.push_back(fletcher16(block_span(data, plan, i, j)));

    artifact.parity.assign(data.begin(), data.begin() + plan.parity_block_len);
    for (std::uint32_t i = 1; i < plan.parity_blocks; ++i)
        xor_accumulate(artifact.parity,
                       std::span<const std::uint8_t>(data).subspan(
                           static_cast<std::uint64_t>(i) * plan.parity_block_len,
                           plan.parity_block_len));

    result.regen_path = regen_path_for(archive);
    write_regen_file(result.regen_path, artifact);
    return result;
}

VerifyResult verify(const std::filesystem::path& archive) {
    const std::string stored = read_sidecar_hash(sidecar_path_for(archive));
    const std::string computed = sha256_hex_file(archive);
    return computed == stored ? VerifyResult::Match : VerifyResult::Mismatch;
}

std::vector<std::uint32_t> locate_bad_bits(std::span<const std::uint8_t> computed,
                                           std::span<const std::uint8_t> stored,
                                           std::size_t effective_len) {
    std::vector<std::uint32_t> bad_bits;
    for (std::size_t k = 0; k < effective_len; ++k) {
        const std::uint8_t diff = computed[k] ^ stored[k];
        if (diff == 0)
            continue;
        for (std::uint32_t l = 0; l < 8; ++l)
            if (diff & (1u << l))
                bad_bits.push_back(static_cast<std::uint32_t>(k * 8 + l));
    }
    return bad_bits;
}

CombinationWalker::CombinationWalker(std::span<const std::uint32_t> sorted_bits)
    : bits_(sorted_bits.begin(), sorted_bits.end()), cardinality_(bits_.size()) {}

bool CombinationWalker::next(std::vector<std::uint32_t>& out) {
    if (cardinality_ == 0)
        return false;

    if (fresh_) {
        // First subset of the current cardinality: the lowest indexes.
        cursor_.resize(cardinality_);
        for (std::size_t t = 0; t < cardinality_; ++t)
            cursor_[t] = t;
        fresh_ = false;
    } else {
        // Advance the rightmost position that still has room to move.
        std::size_t t = cardinality_;
        while (t > 0 && cursor_[t - 1] == bits_.size() - (cardinality_ - (t - 1)))
            --t;
        if (t == 0) {
            --cardinality_;
            fresh_ = true;
            return next(out);
        }
        ++cursor_[t - 1];
        for (std::size_t u = t; u < cardinality_; ++u)
            cursor_[u] = cursor_[u - 1] + 1;
    }

    out.resize(cardinality_);
    for (std::size_t t = 0; t < cardinality_; ++t)
        out[t] = bits_[cursor_[t]];
    return true;
}

std::vector<std::vector<std::uint32_t>> generate_combinations(
    std::span<const std::uint32_t> bad_bits, std::uint64_t attempt_cap) {
    std::vector<std::vector<std::uint32_t>> subsets;
    CombinationWalker walker(bad_bits);
    std::vector<std::uint32_t> subset;
    while (subsets.size() < attempt_cap && walker.next(subset))
        subsets.push_back(subset);
    return subsets;
}

CorrectionAttempt attempt_block_correction(std::span<const std::uint8_t> block,
                                           std::span<const std::uint32_t> bad_bits,
                                           std::uint16_t target_checksum,
                                           std::uint64_t attempt_cap) {
    CorrectionAttempt result;
    CombinationWalker walker(bad_bits);
    std::vector<std::uint32_t> subset;
    std::vector<std::uint8_t> candidate;
    while (result.attempts < attempt_cap && walker.next(subset)) {
        ++result.attempts;
        candidate.assign(block.begin(), block.end());
        flip_bits(candidate, subset);
        if (fletcher16(candidate) == target_checksum) {
            result.corrected = std::move(candidate);
            return result;
        }
    }
    return result;
}

ApplyResult apply_corrections(std::span<const Correction> corrections,
                              const std::set<std::uint64_t>& failed_block_indexes,
                              const std::filesystem::path& archive) {
    ApplyResult result;
    std::uint64_t writable = 0;
    for (const auto& correction : corrections)
        if (!failed_block_indexes.contains(correction.block_index))
            ++writable;
    if (writable == 0) {
        result.skipped = corrections.size();
        return result;
    }

    std::fstream out(archive, std::ios::binary | std::ios::in | std::ios::out);
    if (!out)
        raise(ErrorKind::Io, "cannot open " + archive.string() + " for repair");

    for (const auto& correction : corrections) {
        if (failed_block_indexes.contains(correction.block_index)) {
            ++result.skipped;
            continue;
        }
        out.seekp(static_cast<std::streamoff>(correction.offset));
        out.write(reinterpret_cast<const char*>(correction.data.data()), correction.length);
        if (!out)
            raise(ErrorKind::PartialWrite,
                  "write failure on " + archive.string() + " after applying " +
                      std::to_string(result.applied) + " of " + std::to_string(writable) +
                      " corrections");
        ++result.applied;
    }
    out.flush();
    if (!out)
        raise(ErrorKind::PartialWrite, "flush failure on " + archive.string());
    return result;
}

RecoveryReport regenerate(const std::filesystem::path& archive,
                          const RegenerateOptions& options) {
    const std::vector<std::uint8_t> data = read_file(archive);
    const RegenArtifact artifact = read_regen_file(regen_path_for(archive), data.size());
    const GeometryPlan plan = plan_from_counts(data.size(), artifact.header.parity_blocks,
                                               artifact.header.checksum_block_len);

    RecoveryReport report;
    std::vector<Correction> corrections;

    // Phase 1: scan every checksum block; the archive is read-only here.
    std::vector<std::uint8_t> group_parity;
    for (std::uint32_t i = 0; i < plan.parity_blocks; ++i) {
        for (std::uint64_t j = 0; j < plan.checksum_blocks; ++j) {
            const auto block = block_span(data, plan, i, j);
            const std::uint16_t stored =
                artifact.checksums[static_cast<std::uint64_t>(i) * plan.checksum_blocks + j];
            if (fletcher16(block) == stored)
                continue;

            const std::uint32_t effective = plan.block_len(j);

            // XOR of the j-th segment of every parity block, from the
            // file as it currently stands.
            group_parity.assign(block_span(data, plan, 0, j).begin(),
                                block_span(data, plan, 0, j).end());
            for (std::uint32_t k = 1; k < plan.parity_blocks; ++k)
                xor_accumulate(group_parity, block_span(data, plan, k, j));

            const auto stored_parity = std::span<const std::uint8_t>(artifact.parity)
                                           .subspan(j * plan.checksum_block_len, effective);
            const auto bad_bits = locate_bad_bits(group_parity, stored_parity, effective);

            auto attempt =
                attempt_block_correction(block, bad_bits, stored, options.attempt_cap);
            report.combinations_tried += attempt.attempts;
            if (attempt.corrected) {
                corrections.push_back(Correction{plan.block_offset(i, j), j, effective,
                                                 std::move(*attempt.corrected)});
            } else {
                report.failed_block_indexes.insert(j);
            }
        }
    }

    report.corrections_found = corrections.size();

    // Phase 2: write back every correction not vetoed by a failure at
    // the same block index.
    const ApplyResult applied =
        apply_corrections(corrections, report.failed_block_indexes, archive);
    report.corrections_applied = applied.applied;
    report.corrections_skipped = applied.skipped;

    // Fold the digest check into the outcome when a sidecar is present.
    const bool touched = report.corrections_found > 0 || !report.failed_block_indexes.empty();
    try {
        const VerifyResult check = verify(archive);
        report.digest_checked = true;
        if (check == VerifyResult::Match)
            report.outcome = touched ? RecoveryOutcome::Repaired : RecoveryOutcome::Clean;
        else
            report.outcome = RecoveryOutcome::PartialFailure;
    } catch (const Error&) {
        // No usable sidecar; fall back to the structural result.
        report.digest_checked = false;
        if (!report.failed_block_indexes.empty())
            report.outcome = RecoveryOutcome::PartialFailure;
        else
            report.outcome = touched ? RecoveryOutcome::Repaired : RecoveryOutcome::Clean;
    }
    return report;
}

} // namespace regen
