#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "lmap/errors.hpp"

namespace lmap::detail {

// Little-endian encoding regardless of host order.

template <typename T>
T byteswap_if_big(T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&value, bytes, sizeof(T));
  }
  return value;
}

template <typename T>
void write_le(std::ostream& out, T value) {
  value = byteswap_if_big(value);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void write_le_array(std::ostream& out, std::span<const T> values) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
  } else {
    for (const T& v : values) write_le(out, v);
  }
}

inline void write_string(std::ostream& out, std::string_view s) {
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline void expect_stream(std::istream& in, const char* what) {
  if (!in) throw DataError(std::string("truncated binary file while reading ") + what);
}

template <typename T>
T read_le(std::istream& in, const char* what = "value") {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  expect_stream(in, what);
  return byteswap_if_big(value);
}

template <typename T>
void read_le_array(std::istream& in, std::span<T> values, const char* what = "array") {
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
  expect_stream(in, what);
  if constexpr (std::endian::native != std::endian::little) {
    for (T& v : values) v = byteswap_if_big(v);
  }
}

inline std::string read_string(std::istream& in, const char* what = "string") {
  auto len = read_le<std::uint32_t>(in, what);
  std::string s(len, '\0');
  in.read(s.data(), len);
  expect_stream(in, what);
  return s;
}

inline void expect_magic(std::istream& in, std::string_view magic) {
  std::string got(magic.size(), '\0');
  in.read(got.data(), static_cast<std::streamsize>(got.size()));
  if (!in || got != magic) throw DataError("bad magic bytes, expected '" + std::string(magic) + "'");
}

}  // namespace lmap::detail
