#include "anchorhash/hashing.hpp"

#include <algorithm>
#include <random>

namespace anchorhash {

namespace {
constexpr Salt kKeyStreamSalt = 0x6b65797374726561ULL;  // "keystrea"
constexpr Salt kBytesSalt = 0x7265736f75726365ULL;      // "resource"
}  // namespace

std::uint64_t hash_bytes(std::string_view bytes) noexcept {
  std::uint64_t h = mix64(bytes.size(), kBytesSalt);
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::uint64_t chunk = 0;
    const std::size_t n = std::min<std::size_t>(8, bytes.size() - pos);
    for (std::size_t i = 0; i < n; ++i) {
      chunk |= std::uint64_t{static_cast<unsigned char>(bytes[pos + i])} << (8 * i);
    }
    h = mix64(chunk, h);
    pos += n;
  }
  return h;
}

std::vector<Key> make_keys(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(mix64(seed, kKeyStreamSalt));
  std::vector<Key> keys(count);
  for (auto& k : keys) {
    k = rng();
  }
  return keys;
}

}  // namespace anchorhash
