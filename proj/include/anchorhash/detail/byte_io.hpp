#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace anchorhash::detail {

// Little-endian writer with a trailing crc32.
class ByteWriter {
 public:
  void raw(std::string_view bytes) { buf_.append(bytes); }
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void u32s(std::span<const std::uint32_t> values) {
    for (const auto v : values) u32(v);
  }
  void str8(std::string_view s);  // u8 length + bytes
  // Appends crc32 of everything written so far.
  void seal();
  std::string take() { return std::move(buf_); }

 private:
  void put(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::string buf_;
};

// Bounds-checked reader; every overrun throws IntegrityError.
class ByteReader {
 public:
  // Verifies the trailing crc32 and returns a reader over the payload.
  static ByteReader checked(std::string_view bytes, std::string_view what);

  std::string_view raw(std::size_t n);
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::vector<std::uint32_t> u32s(std::size_t count);
  std::string str8();
  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  void expect_end() const;

 private:
  ByteReader(std::string_view data, std::string_view what) : data_(data), what_(what) {}
  std::uint64_t get(int width);

  std::string_view data_;
  std::string what_;
  std::size_t pos_ = 0;
};

}  // namespace anchorhash::detail
