#include "regen/format.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "regen/errors.hpp"

namespace regen {

namespace {

void put_be16(std::uint8_t* out, std::uint16_t value) {
    out[0] = static_cast<std::uint8_t>(value >> 8);
    out[1] = static_cast<std::uint8_t>(value & 0xff);
}

std::uint16_t get_be16(const std::uint8_t* in) {
    return static_cast<std::uint16_t>(in[0] << 8 | in[1]);
}

bool is_hex_digit(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

} // namespace

std::array<std::uint8_t, kRegenHeaderSize> encode_header(const RegenHeader& header) {
    if (header.checksum_block_len == 0)
        raise(ErrorKind::InvalidArgument, "header checksum block length must be at least 1");
    if (header.parity_blocks == 0)
        raise(ErrorKind::InvalidArgument, "header parity block count must be at least 1");

    std::array<std::uint8_t, kRegenHeaderSize> bytes{};
    std::copy(kRegenMagic.begin(), kRegenMagic.end(), bytes.begin());
    put_be16(bytes.data() + 5, header.version);
    put_be16(bytes.data() + 7, header.checksum_block_len);
    put_be16(bytes.data() + 9, header.parity_blocks);
    return bytes;
}

RegenHeader decode_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kRegenHeaderSize)
        raise(ErrorKind::TruncatedFile, "regen header truncated: need 11 bytes, have " +
                                            std::to_string(bytes.size()));
    if (!std::equal(kRegenMagic.begin(), kRegenMagic.end(), bytes.begin()))
        raise(ErrorKind::NotARegenFile, "bad magic sequence, not a regen file");

    RegenHeader header;
    header.version = get_be16(bytes.data() + 5);
    header.checksum_block_len = get_be16(bytes.data() + 7);
    header.parity_blocks = get_be16(bytes.data() + 9);

    if (header.version == 0)
        raise(ErrorKind::NotARegenFile, "malformed regen header: version 0");
    if (header.version > kRegenVersion)
        raise(ErrorKind::UnsupportedVersion,
              "regen file version " + std::to_string(header.version) + " is not supported");
    if (header.checksum_block_len == 0 || header.parity_blocks == 0)
        raise(ErrorKind::NotARegenFile, "malformed regen header: zero block field");
    return header;
}

std::uint64_t regen_file_size(const GeometryPlan& plan) {
    return kRegenHeaderSize + 2 * plan.total_checksum_blocks() + plan.parity_block_len;
}

std::filesystem::path regen_path_for(const std::filesystem::path& archive) {
    auto path = archive;
    path += kRegenExtension;
    return path;
}

std::filesystem::path sidecar_path_for(const std::filesystem::path& archive) {
    auto path = archive;
    path += kSidecarExtension;
    return path;
}

void write_regen_file(const std::filesystem::path& path, const RegenArtifact& artifact) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        raise(ErrorKind::Io, "cannot create " + path.string());

    auto header = encode_header(artifact.header);
    out.write(reinterpret_cast<const char*>(header.data()), header.size());

    std::vector<std::uint8_t> table(artifact.checksums.size() * 2);
    for (std::size_t i = 0; i < artifact.checksums.size(); ++i)
        put_be16(table.data() + i * 2, artifact.checksums[i]);
    out.write(reinterpret_cast<const char*>(table.data()), table.size());
    out.write(reinterpret_cast<const char*>(artifact.parity.data()), artifact.parity.size());

    if (!out)
        raise(ErrorKind::Io, "write failure on " + path.string());
}

RegenArtifact read_regen_file(const std::filesystem::path& path, std::uint64_t archive_size) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec))
        raise(ErrorKind::MissingRegenFile, "no regen file at " + path.string());

    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(ErrorKind::Io, "cannot open " + path.string());

    std::array<std::uint8_t, kRegenHeaderSize> header_bytes{};
    in.read(reinterpret_cast<char*>(header_bytes.data()), header_bytes.size());
    if (in.gcount() != static_cast<std::streamsize>(kRegenHeaderSize))
        raise(ErrorKind::TruncatedFile, path.string() + " is shorter than the regen header");

    RegenArtifact artifact;
    artifact.header = decode_header(header_bytes);

    GeometryPlan plan;
    try {
        plan = plan_from_counts(archive_size, artifact.header.parity_blocks,
                                artifact.header.checksum_block_len);
    } catch (const Error& e) {
        raise(ErrorKind::GeometryMismatch,
              "archive no longer fits the stored layout: " + std::string(e.what()));
    }

    const std::uint64_t expected = regen_file_size(plan);
    const std::uint64_t actual = std::filesystem::file_size(path);
    if (actual != expected)
        raise(ErrorKind::GeometryMismatch,
              path.string() + " is " + std::to_string(actual) + " bytes but the archive's " +
                  std::to_string(archive_size) + "-byte layout requires " +
                  std::to_string(expected));

    const std::uint64_t count = plan.total_checksum_blocks();
    std::vector<std::uint8_t> table(count * 2);
    in.read(reinterpret_cast<char*>(table.data()), table.size());
    artifact.checksums.resize(count);
    for (std::uint64_t i = 0; i < count; ++i)
        artifact.checksums[i] = get_be16(table.data() + i * 2);

    artifact.parity.resize(plan.parity_block_len);
    in.read(reinterpret_cast<char*>(artifact.parity.data()), artifact.parity.size());
    if (!in)
        raise(ErrorKind::TruncatedFile, "unexpected end of " + path.string());
    return artifact;
}

void write_sidecar_hash(const std::filesystem::path& path, const std::string& digest_hex) {
    if (digest_hex.size() != 64 ||
        !std::all_of(digest_hex.begin(), digest_hex.end(), is_hex_digit))
        raise(ErrorKind::InvalidArgument, "digest must be 64 hex characters");

    std::string normalized = digest_hex;
    std::transform(normalized.begin(), normalized.end(), normalized.begin(),
                   [](unsigned char c) { return std::tolower(c); });

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        raise(ErrorKind::Io, "cannot create " + path.string());
    out << normalized << '\n';
    if (!out)
        raise(ErrorKind::Io, "write failure on " + path.string());
}

std::string read_sidecar_hash(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec))
        raise(ErrorKind::MissingSidecar, "no digest sidecar at " + path.string());

    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(ErrorKind::Io, "cannot open " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    auto begin = std::find_if_not(content.begin(), content.end(), is_space);
    auto end = std::find_if_not(content.rbegin(), content.rend(), is_space).base();
    std::string digest(begin, begin < end ? end : begin);

    if (digest.size() != 64 || !std::all_of(digest.begin(), digest.end(), is_hex_digit))
        raise(ErrorKind::MalformedSidecar,
              path.string() + " does not hold a 64-character hex digest");
    std::transform(digest.begin(), digest.end(), digest.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return digest;
}

} // namespace regen
