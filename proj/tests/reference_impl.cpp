#include "reference_impl.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <set>
#include <stdexcept>

namespace reference {

std::uint16_t fletcher16(std::span<const std::uint8_t> data) {
    unsigned s1 = 0;
    unsigned s2 = 0;
    for (std::uint8_t byte : data) {
        s1 = (s1 + byte) % 255;
        s2 = (s2 + s1) % 255;
    }
    return static_cast<std::uint16_t>(s2 * 256 + s1);
}

namespace {

std::uint16_t be16(std::span<const std::uint8_t> bytes, std::size_t offset) {
    return static_cast<std::uint16_t>(bytes[offset] << 8 | bytes[offset + 1]);
}

// All non-empty subsets of the bad-bit list, largest first, ascending
// lexicographic index tuples within one size.
std::vector<std::vector<std::uint32_t>> all_subsets(const std::vector<std::uint32_t>& bits) {
    if (bits.size() > 20)
        throw std::runtime_error("reference recovery is limited to tiny instances");
    std::vector<std::vector<std::uint32_t>> subsets;
    const std::uint32_t count = 1u << bits.size();
    for (std::uint32_t mask = 1; mask < count; ++mask) {
        std::vector<std::uint32_t> subset;
        for (std::size_t t = 0; t < bits.size(); ++t)
            if (mask & (1u << t))
                subset.push_back(bits[t]);
        subsets.push_back(std::move(subset));
    }
    std::sort(subsets.begin(), subsets.end(),
              [](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
                  if (a.size() != b.size())
                      return a.size() > b.size();
                  return a < b;
              });
    return subsets;
}

} // namespace

RecoveryResult recover(std::span<const std::uint8_t> corrupted,
                       std::span<const std::uint8_t> regen_bytes) {
    assert(regen_bytes.size() >= 11);
    assert(regen_bytes[0] == 'R' && regen_bytes[1] == 'E' && regen_bytes[2] == 'G' &&
           regen_bytes[3] == 'E' && regen_bytes[4] == 'N');

    const std::uint64_t cbl = be16(regen_bytes, 7);
    const std::uint64_t pb = be16(regen_bytes, 9);
    const std::uint64_t pbl = corrupted.size() / pb;
    const std::uint64_t cb = (pbl + cbl - 1) / cbl;
    const std::uint64_t lcbl = pbl - (cb - 1) * cbl;
    const std::uint64_t parity_base = 11 + cb * 2 * pb;

    struct Fix {
        std::uint64_t offset;
        std::uint64_t j;
        std::vector<std::uint8_t> bytes;
    };
    std::vector<Fix> fixes;
    std::set<std::uint64_t> failed;
    RecoveryResult result;

    for (std::uint64_t i = 0; i < pb; ++i) {
        for (std::uint64_t j = 0; j < cb; ++j) {
            const std::uint64_t bl = (j == cb - 1) ? lcbl : cbl;
            const std::uint64_t offset = i * pbl + j * cbl;
            std::vector<std::uint8_t> block(corrupted.begin() + offset,
                                            corrupted.begin() + offset + bl);
            const std::uint16_t stored = be16(regen_bytes, 11 + i * cb * 2 + j * 2);
            if (fletcher16(block) == stored)
                continue;

            std::vector<std::uint32_t> bad_bits;
            for (std::uint64_t k = 0; k < bl; ++k) {
                std::uint8_t live = 0;
                for (std::uint64_t g = 0; g < pb; ++g)
                    live ^= corrupted[g * pbl + j * cbl + k];
                const std::uint8_t kept = regen_bytes[parity_base + j * cbl + k];
                for (std::uint32_t l = 0; l < 8; ++l)
                    if ((live & (1u << l)) != (kept & (1u << l)))
                        bad_bits.push_back(static_cast<std::uint32_t>(k * 8 + l));
            }

            bool found = false;
            for (const auto& subset : all_subsets(bad_bits)) {
                ++result.combinations_tried;
                std::vector<std::uint8_t> candidate = block;
                for (std::uint32_t bit : subset)
                    candidate[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
                if (fletcher16(candidate) == stored) {
                    fixes.push_back(Fix{offset, j, std::move(candidate)});
                    found = true;
                    break;
                }
            }
            if (!found)
                failed.insert(j);
        }
    }

    result.data.assign(corrupted.begin(), corrupted.end());
    for (const Fix& fix : fixes)
        if (!failed.contains(fix.j))
            std::copy(fix.bytes.begin(), fix.bytes.end(), result.data.begin() + fix.offset);
    result.failed_blocks.assign(failed.begin(), failed.end());
    return result;
}

} // namespace reference
