#pragma once

#include <cstdint>

namespace regen {

// Deterministic block layout of an archive file. The leading
// parity_blocks * parity_block_len bytes are split into parity blocks,
// each of which is a run of checksum blocks; the last checksum block in
// a parity block is wrapped at the parity-block boundary. The trailing
// tail_len bytes (< parity_blocks) carry no parity or checksum coverage.
struct GeometryPlan {
    std::uint64_t file_size = 0;
    std::uint32_t parity_blocks = 0;           // pb
    std::uint64_t parity_block_len = 0;        // pbl = floor(file_size / pb)
    std::uint32_t checksum_block_len = 0;      // cbl
    std::uint64_t checksum_blocks = 0;         // cb = ceil(pbl / cbl), per parity block
    std::uint32_t last_checksum_block_len = 0; // lcbl, in [1, cbl]
    std::uint64_t tail_len = 0;                // file_size - pb * pbl

    std::uint64_t total_checksum_blocks() const {
        return static_cast<std::uint64_t>(parity_blocks) * checksum_blocks;
    }

    // Effective length of checksum block j: cbl, or lcbl for the last one.
    std::uint32_t block_len(std::uint64_t j) const {
        return j + 1 == checksum_blocks ? last_checksum_block_len : checksum_block_len;
    }

    // Absolute archive offset of checksum block (i, j).
    std::uint64_t block_offset(std::uint32_t i, std::uint64_t j) const {
        return static_cast<std::uint64_t>(i) * parity_block_len + j * checksum_block_len;
    }
};

// round(100 / parity_percent), half away from zero.
std::uint32_t parity_block_count(std::uint32_t parity_percent);

GeometryPlan plan_geometry(std::uint64_t file_size, std::uint32_t parity_percent,
                           std::uint32_t checksum_block_len);

// Same layout derived from an explicit block count, as done when the
// count comes from a stored header rather than a percentage.
GeometryPlan plan_from_counts(std::uint64_t file_size, std::uint32_t parity_blocks,
                              std::uint32_t checksum_block_len);

} // namespace regen
