#include "regen/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "regen/errors.hpp"

namespace regen {

namespace {

double clamp01(double value) { return std::clamp(value, 0.0, 1.0); }

void validate(const ReliabilityParams& params) {
    if (params.data_bits == 0 || params.parity_blocks == 0 || params.checksum_blocks == 0)
        raise(ErrorKind::InvalidArgument, "reliability parameters must be positive");
    if (params.checksum_bits != 8 && params.checksum_bits != 16 && params.checksum_bits != 32)
        raise(ErrorKind::InvalidArgument, "checksum output size must be 8, 16 or 32 bits");
}

} // namespace

double Prediction::clamped_checksum_collision() const { return clamp01(checksum_collision); }
double Prediction::clamped_parity_collision() const { return clamp01(parity_collision); }
double Prediction::clamped_recovery() const { return clamp01(recovery); }

double collision_probability(std::uint32_t bit_errors, std::uint32_t checksum_bits) {
    if (checksum_bits == 0)
        raise(ErrorKind::InvalidArgument, "checksum output size must be positive");
    // Exact in double precision for every combination-set size that fits
    // the mantissa; larger n saturates toward 2^(n-q).
    return (std::exp2(static_cast<double>(bit_errors)) - 1.0) *
           std::exp2(-static_cast<double>(checksum_bits));
}

Prediction predict_reliability(const ReliabilityParams& params, ParityDenominator denominator) {
    validate(params);

    const double n = static_cast<double>(params.bit_errors);
    const double p = static_cast<double>(params.parity_blocks);
    const double c = static_cast<double>(params.checksum_blocks);
    const double q = static_cast<double>(params.checksum_bits);

    Prediction prediction;

    // Collision odds for the average implicated-bit count n*p/c, scaled
    // by the number of errors.
    const double average_bits = n * p / c;
    prediction.checksum_collision =
        std::expm1(average_bits * std::numbers::ln2) * std::exp2(-q) * n;

    // One minus the product of the odds that error i lands on a fresh
    // block index. Accumulated in log space so long products stay sharp.
    const double slots =
        denominator == ParityDenominator::BlockLengthBits ? static_cast<double>(params.data_bits) / p : p;
    double log_product = 0.0;
    for (std::uint64_t i = 0; i < params.bit_errors; ++i) {
        const double factor = 1.0 - static_cast<double>(i) / slots;
        if (factor <= 0.0) {
            prediction.parity_saturated = true;
            break;
        }
        log_product += std::log1p(-static_cast<double>(i) / slots);
    }
    prediction.parity_collision =
        prediction.parity_saturated ? 1.0 : -std::expm1(log_product);

    prediction.recovery = 1.0 - prediction.checksum_collision - prediction.parity_collision;
    return prediction;
}

std::uint64_t redundant_size_bits(std::uint64_t data_bits, std::uint64_t parity_blocks,
                                  std::uint64_t checksum_blocks, std::uint64_t checksum_bits) {
    if (parity_blocks == 0)
        raise(ErrorKind::InvalidArgument, "parity block count must be positive");
    return checksum_bits * checksum_blocks + data_bits / parity_blocks;
}

std::string format_probability(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.16f", value);
    std::string text(buffer);
    while (text.size() > 1 && text.back() == '0')
        text.pop_back();
    if (text.back() == '.')
        text.pop_back();
    return text;
}

std::vector<CollisionRow> default_collision_rows() {
    return {{5, 8},   {5, 16},  {10, 16}, {15, 16}, {15, 32},
            {20, 32}, {25, 32}, {26, 32}, {30, 32}};
}

std::vector<ReliabilityParams> default_prediction_rows() {
    std::vector<ReliabilityParams> rows;
    for (std::uint32_t p : {2u, 5u, 10u, 20u})
        for (std::uint64_t c : {15625ull, 7813ull})
            rows.push_back({8'000'000, p, c, 16, 1000});
    return rows;
}

namespace {

std::string join_row(const std::vector<std::string>& cells, TableFormat format) {
    std::ostringstream out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0)
            out << (format == TableFormat::Csv ? "," : "  ");
        out << cells[i];
    }
    out << '\n';
    return out.str();
}

} // namespace

std::string emit_collision_table(std::span<const CollisionRow> rows, TableFormat format) {
    std::string out = join_row(
        {"bit_errors", "checksum_bits", "combination_set_size", "collision_probability"},
        format);
    for (const auto& row : rows) {
        const std::string combinations =
            row.bit_errors < 64 ? std::to_string((1ull << row.bit_errors) - 1)
                                : "2^" + std::to_string(row.bit_errors) + "-1";
        out += join_row({std::to_string(row.bit_errors), std::to_string(row.checksum_bits),
                         combinations,
                         format_probability(collision_probability(row.bit_errors,
                                                                  row.checksum_bits))},
                        format);
    }
    return out;
}

std::string emit_prediction_table(std::span<const ReliabilityParams> rows, TableFormat format,
                                  ParityDenominator denominator) {
    std::string out = join_row(
        {"data_bits", "parity_blocks", "checksum_blocks", "checksum_bits", "bit_errors",
         "reliability"},
        format);
    char buffer[32];
    for (const auto& row : rows) {
        const Prediction prediction = predict_reliability(row, denominator);
        std::snprintf(buffer, sizeof buffer, "%.7f", prediction.clamped_recovery());
        out += join_row({std::to_string(row.data_bits), std::to_string(row.parity_blocks),
                         std::to_string(row.checksum_blocks), std::to_string(row.checksum_bits),
                         std::to_string(row.bit_errors), buffer},
                        format);
    }
    return out;
}

std::string emit_redundancy_table(std::span<const ReliabilityParams> rows, TableFormat format) {
    std::string out = join_row(
        {"data_bits", "parity_blocks", "checksum_blocks", "checksum_bits", "redundant_bits"},
        format);
    for (const auto& row : rows) {
        out += join_row(
            {std::to_string(row.data_bits), std::to_string(row.parity_blocks),
             std::to_string(row.checksum_blocks), std::to_string(row.checksum_bits),
             std::to_string(redundant_size_bits(row.data_bits, row.parity_blocks,
                                                row.checksum_blocks, row.checksum_bits))},
            format);
    }
    return out;
}

} // namespace regen
