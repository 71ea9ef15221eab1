#include "anchorhash/detail/byte_io.hpp"

#include <zlib.h>

#include "anchorhash/errors.hpp"

namespace anchorhash::detail {

namespace {

std::uint32_t crc_of(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

}  // namespace

void ByteWriter::str8(std::string_view s) {
  u8(static_cast<std::uint8_t>(s.size()));
  raw(s);
}

void ByteWriter::seal() { u32(crc_of(buf_)); }

ByteReader ByteReader::checked(std::string_view bytes, std::string_view what) {
  if (bytes.size() < 4) {
    throw IntegrityError(std::string(what) + ": truncated (" + std::to_string(bytes.size()) + " bytes)");
  }
  const auto payload = bytes.substr(0, bytes.size() - 4);
  ByteReader trailer(bytes.substr(bytes.size() - 4), what);
  const auto stored = static_cast<std::uint32_t>(trailer.get(4));
  if (stored != crc_of(payload)) {
    throw IntegrityError(std::string(what) + ": checksum mismatch");
  }
  return ByteReader(payload, what);
}

std::uint64_t ByteReader::get(int width) {
  if (remaining() < static_cast<std::size_t>(width)) {
    throw IntegrityError(what_ + ": truncated");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= std::uint64_t{static_cast<unsigned char>(data_[pos_ + i])} << (8 * i);
  }
  pos_ += width;
  return v;
}

std::string_view ByteReader::raw(std::size_t n) {
  if (remaining() < n) throw IntegrityError(what_ + ": truncated");
  const auto out = data_.substr(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t ByteReader::u8() { return static_cast<std::uint8_t>(get(1)); }
std::uint32_t ByteReader::u32() { return static_cast<std::uint32_t>(get(4)); }
std::uint64_t ByteReader::u64() { return get(8); }

std::vector<std::uint32_t> ByteReader::u32s(std::size_t count) {
  if (remaining() / 4 < count) throw IntegrityError(what_ + ": truncated");
  std::vector<std::uint32_t> out(count);
  for (auto& v : out) v = u32();
  return out;
}

std::string ByteReader::str8() {
  const std::uint8_t len = u8();
  return std::string(raw(len));
}

void ByteReader::expect_end() const {
  if (remaining() != 0) {
    throw IntegrityError(what_ + ": " + std::to_string(remaining()) + " trailing bytes");
  }
}

}  // namespace anchorhash::detail
