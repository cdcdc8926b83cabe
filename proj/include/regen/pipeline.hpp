#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "regen/geometry.hpp"

namespace regen {

// 2^10 - 1 candidate flips; exhaustive for up to 10 implicated bits.
inline constexpr std::uint64_t kDefaultAttemptCap = 1023;

struct Correction {
    std::uint64_t offset = 0;      // absolute byte offset in the archive
    std::uint64_t block_index = 0; // j within its parity block
    std::uint32_t length = 0;      // cbl, or lcbl for the wrapped last block
    std::vector<std::uint8_t> data;
};

enum class RecoveryOutcome { Clean, Repaired, PartialFailure };

struct RecoveryReport {
    std::uint64_t corrections_found = 0;
    std::uint64_t corrections_applied = 0;
    std::uint64_t corrections_skipped = 0;
    std::set<std::uint64_t> failed_block_indexes; // j values
    std::uint64_t combinations_tried = 0;
    RecoveryOutcome outcome = RecoveryOutcome::Clean;
    // True when a sidecar digest was available and compared after repair.
    bool digest_checked = false;
};

struct GenerateResult {
    std::filesystem::path sidecar_path;
    std::filesystem::path regen_path;
    std::string digest;
    GeometryPlan plan;
};

GenerateResult generate(const std::filesystem::path& archive, std::uint32_t parity_percent,
                        std::uint32_t checksum_block_len);

enum class VerifyResult { Match, Mismatch };

VerifyResult verify(const std::filesystem::path& archive);

// Ascending bit indexes k*8 + l (l counted from the least significant
// bit) at which the two segments differ, for k < effective_len.
std::vector<std::uint32_t> locate_bad_bits(std::span<const std::uint8_t> computed,
                                           std::span<const std::uint8_t> stored,
                                           std::size_t effective_len);

// Walks the non-empty subsets of a sorted bit-index list lazily:
// cardinality strictly non-increasing starting from the full set, and
// ascending lexicographic tuple order within one cardinality.
class CombinationWalker {
public:
    explicit CombinationWalker(std::span<const std::uint32_t> sorted_bits);

    // Fills `out` with the next subset; false once exhausted.
    bool next(std::vector<std::uint32_t>& out);

private:
    std::vector<std::uint32_t> bits_;
    std::vector<std::size_t> cursor_; // positions into bits_
    std::size_t cardinality_ = 0;
    bool fresh_ = true;
};

std::vector<std::vector<std::uint32_t>> generate_combinations(
    std::span<const std::uint32_t> bad_bits, std::uint64_t attempt_cap = kDefaultAttemptCap);

struct CorrectionAttempt {
    std::optional<std::vector<std::uint8_t>> corrected;
    std::uint64_t attempts = 0;
};

// Flips each candidate subset on a fresh copy of the block and returns
// the first copy whose Fletcher-16 equals the stored checksum.
CorrectionAttempt attempt_block_correction(std::span<const std::uint8_t> block,
                                           std::span<const std::uint32_t> bad_bits,
                                           std::uint16_t target_checksum,
                                           std::uint64_t attempt_cap = kDefaultAttemptCap);

struct ApplyResult {
    std::uint64_t applied = 0;
    std::uint64_t skipped = 0;
};

// Writes every correction whose block index is not vetoed by a failure
// at the same index. Only the recorded extents are touched.
ApplyResult apply_corrections(std::span<const Correction> corrections,
                              const std::set<std::uint64_t>& failed_block_indexes,
                              const std::filesystem::path& archive);

struct RegenerateOptions {
    std::uint64_t attempt_cap = kDefaultAttemptCap;
};

RecoveryReport regenerate(const std::filesystem::path& archive,
                          const RegenerateOptions& options = {});

} // namespace regen
