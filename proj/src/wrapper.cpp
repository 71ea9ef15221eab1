#include "anchorhash/wrapper.hpp"

#include "anchorhash/detail/byte_io.hpp"

namespace anchorhash {

namespace {
constexpr std::string_view kMagic = "AHWR";
constexpr std::uint32_t kVersion = 1;
}  // namespace

std::string encode_wrapper_snapshot(const WrapperSnapshot& snap) {
  detail::ByteWriter out;
  out.raw(kMagic);
  out.u32(kVersion);
  const std::string anchor = encode_snapshot(snap.anchor);
  out.u32(static_cast<std::uint32_t>(anchor.size()));
  out.raw(anchor);
  out.u32(static_cast<std::uint32_t>(snap.pairs.size()));
  for (const auto& [b, name] : snap.pairs) {
    out.u32(b);
    out.str8(name);
  }
  out.seal();
  return out.take();
}

WrapperSnapshot decode_wrapper_snapshot(std::string_view bytes) {
  auto in = detail::ByteReader::checked(bytes, "wrapper snapshot");
  if (in.raw(kMagic.size()) != kMagic) throw IntegrityError("wrapper snapshot: bad magic");
  if (in.u32() != kVersion) throw IntegrityError("wrapper snapshot: unsupported version");
  WrapperSnapshot snap;
  const std::uint32_t len = in.u32();
  snap.anchor = decode_snapshot(in.raw(len));
  const std::uint32_t count = in.u32();
  if (count > snap.anchor.capacity) throw IntegrityError("wrapper snapshot: too many pairs");
  for (std::uint32_t i = 0; i < count; ++i) {
    const BucketId b = in.u32();
    snap.pairs.emplace_back(b, in.str8());
  }
  in.expect_end();
  return snap;
}

}  // namespace anchorhash
