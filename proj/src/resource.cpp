#include "anchorhash/resource.hpp"

#include "anchorhash/errors.hpp"

namespace anchorhash {

ResourceId::ResourceId(std::string value) : value_(std::move(value)) {
  if (value_.empty()) throw ContractViolation("resource id must be nonempty");
  if (value_.size() > kMaxLength) {
    throw ContractViolation("resource id longer than 255 bytes");
  }
}

}  // namespace anchorhash
