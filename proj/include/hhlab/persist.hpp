#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hhlab/hhcore.hpp"

namespace hhlab {

// Binary container, all integers and floats little-endian:
//   "HHLAB1"                      6 bytes
//   nx, ny, rank                  uint32 each
//   alpha, epsilon, cutoff_scale  float64 each
//   normal_sign                   uint8, 1 = inward normal at both boundary circles
//   A_x, A_y, phi, psi            nx*ny*rank*rank complex entries each, stored as
//                                 (re, im) float64 pairs; point (i,j) at i*ny + j,
//                                 matrix entries column-major
struct FileHeader {
    std::uint32_t nx = 0, ny = 0, rank = 0;
    double alpha = 0.0, epsilon = 0.0, cutoff_scale = 0.0;
    std::uint8_t normal_sign = 1;

    std::string describe() const;
};

inline constexpr char kMagic[6] = {'H', 'H', 'L', 'A', 'B', '1'};
inline constexpr std::size_t kHeaderBytes = 6 + 3 * 4 + 3 * 8 + 1;

void persist_configuration(const Configuration& c, const std::string& path);

// Reads only the header.
FileHeader inspect_configuration(const std::string& path);

// With expected_rank set, a file of another rank is rejected naming both ranks.
Configuration load_configuration(const std::string& path, std::optional<int> expected_rank = std::nullopt);

} // namespace hhlab
