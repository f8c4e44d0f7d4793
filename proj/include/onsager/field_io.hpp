#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "onsager/grid_field.hpp"

namespace onsager {

/// OFX1 field files (all integers and floats little-endian):
///
///   offset  size  content
///        0     4  ASCII "OFX1"
///        4     4  u32 format version (= 1)
///        8     8  reserved, zero
///       16     4  u32 geometry tag (0 = periodic3, 1 = channel)
///       20    12  u32 dims[3] (n1, n2, n3)
///       32    24  f64 lengths[3]
///       56     -  component 0, 1, 2: n1*n2*n3 f64 each, x fastest
inline constexpr std::uint32_t kOfxVersion = 1;
inline constexpr std::size_t kOfxHeaderBytes = 56;

std::vector<unsigned char> encode_ofx1(const GridField& f);
GridField decode_ofx1(const std::vector<unsigned char>& bytes);

void write_ofx1(const std::filesystem::path& path, const GridField& f);
GridField read_ofx1(const std::filesystem::path& path);

}  // namespace onsager
