#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace anchorhash {

// Opaque resource identifier (server address, pool member name, ...):
// 1 to 255 bytes.
class ResourceId {
 public:
  static constexpr std::size_t kMaxLength = 255;

  // Throws ContractViolation for empty or oversized values.
  explicit ResourceId(std::string value);

  const std::string& str() const noexcept { return value_; }

  friend auto operator<=>(const ResourceId&, const ResourceId&) = default;

 private:
  std::string value_;
};

struct ResourceIdHash {
  std::size_t operator()(const ResourceId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};

}  // namespace anchorhash
