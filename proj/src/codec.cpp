#include "regen/codec.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <memory>

#include "regen/errors.hpp"

namespace regen {

namespace {

// Largest run of byte additions before the 32-bit accumulators could
// overflow: n*(n+1)/2 * 255 < 2^32.
constexpr std::size_t kFletcherFoldInterval = 5802;

constexpr char kHexDigits[] = "0123456789abcdef";

std::string to_hex(const unsigned char* data, std::size_t len) {
    std::string out(len * 2, '\0');
    for (std::size_t i = 0; i < len; ++i) {
        out[i * 2] = kHexDigits[data[i] >> 4];
        out[i * 2 + 1] = kHexDigits[data[i] & 0x0f];
    }
    return out;
}

struct DigestCtxDeleter {
    void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
using DigestCtx = std::unique_ptr<EVP_MD_CTX, DigestCtxDeleter>;

DigestCtx make_sha256_ctx() {
    DigestCtx ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        raise(ErrorKind::Io, "failed to initialize SHA-256 context");
    return ctx;
}

std::string finish_hex(DigestCtx ctx) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        raise(ErrorKind::Io, "failed to finalize SHA-256 digest");
    return to_hex(md, len);
}

} // namespace

void Fletcher16::update(std::span<const std::uint8_t> data) noexcept {
    std::size_t i = 0;
    while (i < data.size()) {
        std::size_t run = std::min(kFletcherFoldInterval, data.size() - i);
        for (std::size_t k = 0; k < run; ++k) {
            sum1_ += data[i + k];
            sum2_ += sum1_;
        }
        sum1_ %= 255;
        sum2_ %= 255;
        i += run;
    }
}

void Fletcher16::reset() noexcept {
    sum1_ = 0;
    sum2_ = 0;
}

std::uint16_t Fletcher16::value() const noexcept {
    return static_cast<std::uint16_t>((sum2_ % 255) * 256 + (sum1_ % 255));
}

std::uint16_t fletcher16(std::span<const std::uint8_t> data) noexcept {
    Fletcher16 sum;
    sum.update(data);
    return sum.value();
}

void xor_accumulate(std::span<std::uint8_t> acc, std::span<const std::uint8_t> src) {
    if (acc.size() != src.size())
        raise(ErrorKind::InvalidArgument, "xor_accumulate: length mismatch");
    for (std::size_t i = 0; i < acc.size(); ++i)
        acc[i] ^= src[i];
}

std::vector<std::uint8_t> xor_parity(std::span<const std::span<const std::uint8_t>> blocks) {
    if (blocks.empty())
        raise(ErrorKind::InvalidArgument, "xor_parity: need at least one block");
    for (const auto& block : blocks)
        if (block.size() != blocks.front().size())
            raise(ErrorKind::InvalidArgument, "xor_parity: blocks differ in length");

    std::vector<std::uint8_t> out(blocks.front().begin(), blocks.front().end());
    for (std::size_t k = 1; k < blocks.size(); ++k)
        xor_accumulate(out, blocks[k]);
    return out;
}

std::string sha256_hex(std::istream& in) {
    auto ctx = make_sha256_ctx();
    char buffer[64 * 1024];
    while (in.good()) {
        in.read(buffer, sizeof buffer);
        std::streamsize count = in.gcount();
        if (count > 0 &&
            EVP_DigestUpdate(ctx.get(), buffer, static_cast<std::size_t>(count)) != 1)
            raise(ErrorKind::Io, "failed to update SHA-256 digest");
    }
    if (in.bad())
        raise(ErrorKind::Io, "read failure while hashing stream");
    return finish_hex(std::move(ctx));
}

std::string sha256_hex(std::span<const std::uint8_t> data) {
    auto ctx = make_sha256_ctx();
    if (!data.empty() && EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1)
        raise(ErrorKind::Io, "failed to update SHA-256 digest");
    return finish_hex(std::move(ctx));
}

std::string sha256_hex_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(ErrorKind::Io, "cannot open " + path.string() + " for hashing");
    return sha256_hex(in);
}

} // namespace regen
