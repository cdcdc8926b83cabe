#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "regen/geometry.hpp"

namespace regen {

inline constexpr std::size_t kRegenHeaderSize = 11;
inline constexpr std::uint16_t kRegenVersion = 1;
inline constexpr std::array<std::uint8_t, 5> kRegenMagic = {'R', 'E', 'G', 'E', 'N'};
inline constexpr const char* kRegenExtension = ".regen";
inline constexpr const char* kSidecarExtension = ".sha256";

struct RegenHeader {
    std::uint16_t version = kRegenVersion;
    std::uint16_t checksum_block_len = 0;
    std::uint16_t parity_blocks = 0;

    bool operator==(const RegenHeader&) const = default;
};

// "REGEN" followed by version, checksum block length and parity block
// count, each as an unsigned big-endian 16-bit integer.
std::array<std::uint8_t, kRegenHeaderSize> encode_header(const RegenHeader& header);
RegenHeader decode_header(std::span<const std::uint8_t> bytes);

// Parsed regen file. Checksums are stored parity-block-major: the value
// for (parity block i, checksum block j) sits at index i * cb + j, which
// in the file is byte offset 11 + i * cb * 2 + j * 2. The parity blob
// starts right after the table.
struct RegenArtifact {
    RegenHeader header;
    std::vector<std::uint16_t> checksums;
    std::vector<std::uint8_t> parity;
};

// 11 + 2 * pb * cb + pbl
std::uint64_t regen_file_size(const GeometryPlan& plan);

std::filesystem::path regen_path_for(const std::filesystem::path& archive);
std::filesystem::path sidecar_path_for(const std::filesystem::path& archive);

void write_regen_file(const std::filesystem::path& path, const RegenArtifact& artifact);

// Reads and validates a regen file against the archive's current size;
// any layout disagreement is a geometry mismatch, not a silent shift.
RegenArtifact read_regen_file(const std::filesystem::path& path, std::uint64_t archive_size);

// Sidecar digest file: 64 lowercase hex characters plus one newline.
// The reader also accepts uppercase digests and surrounding whitespace,
// so output from any external SHA-256 tool can be dropped in.
void write_sidecar_hash(const std::filesystem::path& path, const std::string& digest_hex);
std::string read_sidecar_hash(const std::filesystem::path& path);

} // namespace regen
