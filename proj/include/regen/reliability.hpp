#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace regen {

struct ReliabilityParams {
    std::uint64_t data_bits = 0;       // d
    std::uint32_t parity_blocks = 0;   // p
    std::uint64_t checksum_blocks = 0; // c, total across all parity blocks
    std::uint32_t checksum_bits = 0;   // q, one of 8/16/32
    std::uint64_t bit_errors = 0;      // n
};

// Denominator used for the per-index collision product.
enum class ParityDenominator {
    // d / p, the bit length of one parity block. Reproduces the
    // reference prediction grid and is the default.
    BlockLengthBits,
    // p itself, the literal symbol; collapses once n reaches p.
    BlockCount,
};

struct Prediction {
    // Raw model outputs. The checksum term can exceed 1 for large n and
    // the recovery term can go negative; clamped accessors report the
    // presentable values while the raw figures stay inspectable.
    double checksum_collision = 0.0;
    double parity_collision = 0.0;
    double recovery = 0.0;
    bool parity_saturated = false; // product hit a zero or negative factor

    double clamped_checksum_collision() const;
    double clamped_parity_collision() const;
    double clamped_recovery() const;
};

// (2^n - 1) / 2^q
double collision_probability(std::uint32_t bit_errors, std::uint32_t checksum_bits);

Prediction predict_reliability(const ReliabilityParams& params,
                               ParityDenominator denominator = ParityDenominator::BlockLengthBits);

// q*c + floor(d/p) bits of redundant data.
std::uint64_t redundant_size_bits(std::uint64_t data_bits, std::uint64_t parity_blocks,
                                  std::uint64_t checksum_blocks, std::uint64_t checksum_bits);

// ---- table emission ----

enum class TableFormat { Text, Csv };

struct CollisionRow {
    std::uint32_t bit_errors = 0;
    std::uint32_t checksum_bits = 0;
};

// Probability formatted to at most 16 decimal places with trailing
// zeros trimmed; exact for dyadic values in that range.
std::string format_probability(double value);

std::vector<CollisionRow> default_collision_rows();
std::vector<ReliabilityParams> default_prediction_rows();

std::string emit_collision_table(std::span<const CollisionRow> rows, TableFormat format);
std::string emit_prediction_table(std::span<const ReliabilityParams> rows, TableFormat format,
                                  ParityDenominator denominator = ParityDenominator::BlockLengthBits);
std::string emit_redundancy_table(std::span<const ReliabilityParams> rows, TableFormat format);

} // namespace regen
