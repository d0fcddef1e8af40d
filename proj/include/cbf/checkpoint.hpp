/// @file checkpoint.hpp
/// @brief CBF1 binary checkpoints.
///
/// Layout (little-endian): "CBF1", u32 n, f64 r, mu, alpha, beta, t, then
/// 3*n^3 complex coefficients as (re, im) f64 pairs, component major, FFT index order.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "cbf/fields.hpp"

namespace cbf {

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CheckpointHeader {
    int n = 0;
    double r = 1.0;
    double mu = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    double t = 0.0;
};

struct CheckpointData {
    CheckpointHeader header;
    SpectralField state;
};

void write_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header,
                      const SpectralField& state);
CheckpointData read_checkpoint(const std::filesystem::path& path);

}  // namespace cbf
