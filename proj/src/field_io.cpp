#include "onsager/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "onsager/error.hpp"

namespace onsager {
namespace {

constexpr char kMagic[4] = {'O', 'F', 'X', '1'};

template <class T>
void put_le(std::vector<unsigned char>& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<unsigned char>((bits >> (8 * b)) & 0xFFu));
}

template <class T>
T get_le(const std::vector<unsigned char>& in, std::size_t offset) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) bits |= static_cast<U>(in[offset + b]) << (8 * b);
  return std::bit_cast<T>(bits);
}

}  // namespace

std::vector<unsigned char> encode_ofx1(const GridField& f) {
  std::vector<unsigned char> out;
  out.reserve(kOfxHeaderBytes + 3 * f.size() * sizeof(double));
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_le<std::uint32_t>(out, kOfxVersion);
  put_le<std::uint64_t>(out, 0);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.geometry()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.dims().n1));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.dims().n2));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.dims().n3));
  for (double L : f.lengths()) put_le<double>(out, L);
  for (int c = 0; c < 3; ++c) {
    for (double v : f.component(c)) put_le<double>(out, v);
  }
  return out;
}

GridField decode_ofx1(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kOfxHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ValidationError("OFX1: bad magic or truncated header");
  }
  const auto version = get_le<std::uint32_t>(bytes, 4);
  if (version != kOfxVersion) throw ValidationError("OFX1: unsupported version " + std::to_string(version));
  const auto tag = get_le<std::uint32_t>(bytes, 16);
  if (tag > 1) throw ValidationError("OFX1: unknown geometry tag " + std::to_string(tag));
  Dims dims{static_cast<int>(get_le<std::uint32_t>(bytes, 20)), static_cast<int>(get_le<std::uint32_t>(bytes, 24)),
            static_cast<int>(get_le<std::uint32_t>(bytes, 28))};
  Lengths lengths{get_le<double>(bytes, 32), get_le<double>(bytes, 40), get_le<double>(bytes, 48)};
  const std::size_t n = dims.total();
  if (bytes.size() != kOfxHeaderBytes + 3 * n * sizeof(double)) {
    throw ValidationError("OFX1: payload size does not match dims");
  }
  GridField::Components comps;
  std::size_t offset = kOfxHeaderBytes;
  for (auto& a : comps) {
    a.resize(n);
    for (std::size_t p = 0; p < n; ++p, offset += 8) a[p] = get_le<double>(bytes, offset);
  }
  return GridField(dims, std::move(comps), static_cast<Geometry>(tag), lengths);
}

void write_ofx1(const std::filesystem::path& path, const GridField& f) {
  const auto bytes = encode_ofx1(f);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

GridField read_ofx1(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open field file " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_ofx1(bytes);
}

}  // namespace onsager
