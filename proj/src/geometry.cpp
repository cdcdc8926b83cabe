#include "regen/geometry.hpp"

#include <string>

#include "regen/errors.hpp"

namespace regen {

std::uint32_t parity_block_count(std::uint32_t parity_percent) {
    if (parity_percent < 1 || parity_percent > 100)
        raise(ErrorKind::InvalidArgument,
              "parity percentage must be in 1..100, got " + std::to_string(parity_percent));
    // round(100 / percent), half away from zero: floor(100/p + 1/2).
    return (200 + parity_percent) / (2 * parity_percent);
}

GeometryPlan plan_from_counts(std::uint64_t file_size, std::uint32_t parity_blocks,
                              std::uint32_t checksum_block_len) {
    if (parity_blocks == 0)
        raise(ErrorKind::InvalidArgument, "parity block count must be at least 1");
    if (checksum_block_len == 0)
        raise(ErrorKind::InvalidArgument, "checksum block length must be at least 1");

    GeometryPlan plan;
    plan.file_size = file_size;
    plan.parity_blocks = parity_blocks;
    plan.checksum_block_len = checksum_block_len;
    plan.parity_block_len = file_size / parity_blocks;
    if (plan.parity_block_len == 0)
        raise(ErrorKind::FileTooSmall,
              "file of " + std::to_string(file_size) + " bytes cannot hold " +
                  std::to_string(parity_blocks) + " parity blocks");

    plan.checksum_blocks =
        (plan.parity_block_len + checksum_block_len - 1) / checksum_block_len;
    plan.last_checksum_block_len = static_cast<std::uint32_t>(
        plan.parity_block_len - (plan.checksum_blocks - 1) * checksum_block_len);
    plan.tail_len = file_size - plan.parity_blocks * plan.parity_block_len;
    return plan;
}

GeometryPlan plan_geometry(std::uint64_t file_size, std::uint32_t parity_percent,
                           std::uint32_t checksum_block_len) {
    return plan_from_counts(file_size, parity_block_count(parity_percent), checksum_block_len);
}

} // namespace regen
