#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "fastortho/error.hpp"

// Little-endian primitives shared by the DMAT and EGT1 codecs.
namespace fastortho::binary {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
inline T byteswap_if_big(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t k = 0; k < sizeof(T) / 2; ++k) std::swap(b[k], b[sizeof(T) - 1 - k]);
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

template <typename T>
inline void put(std::ostream& out, T v) {
    v = byteswap_if_big(v);
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
inline T get(std::istream& in) {
    T v;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw IoError("unexpected end of binary stream");
    return byteswap_if_big(v);
}

} // namespace fastortho::binary
