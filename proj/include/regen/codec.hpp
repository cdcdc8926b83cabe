#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace regen {

// Fletcher-16 with modulus 255 and both running sums starting at zero.
// Reduction is deferred while the 32-bit accumulators cannot overflow,
// which leaves the result identical to the per-byte definition.
class Fletcher16 {
public:
    void update(std::span<const std::uint8_t> data) noexcept;
    void reset() noexcept;

    // s2 * 256 + s1; each component is < 255.
    std::uint16_t value() const noexcept;

private:
    std::uint32_t sum1_ = 0;
    std::uint32_t sum2_ = 0;
};

std::uint16_t fletcher16(std::span<const std::uint8_t> data) noexcept;

// acc[i] ^= src[i]; spans must have equal length.
void xor_accumulate(std::span<std::uint8_t> acc, std::span<const std::uint8_t> src);

// Bitwise XOR across all blocks. Requires at least one block and equal
// lengths; a single block is returned unchanged (the mirror case).
std::vector<std::uint8_t> xor_parity(std::span<const std::span<const std::uint8_t>> blocks);

// SHA-256 digest, hex-encoded lowercase.
std::string sha256_hex(std::istream& in);
std::string sha256_hex(std::span<const std::uint8_t> data);
std::string sha256_hex_file(const std::filesystem::path& path);

} // namespace regen
