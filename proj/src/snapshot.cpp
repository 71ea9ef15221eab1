#include "anchorhash/snapshot.hpp"


#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>

#include "anchorhash/detail/byte_io.hpp"
#include "anchorhash/errors.hpp"

namespace anchorhash {

namespace {

constexpr std::string_view kMagic = "AHSN";
constexpr std::uint32_t kVersion = 1;

bool known_tier(std::uint8_t t) {
  return t == static_cast<std::uint8_t>(Tier::kMinimal) ||
         t == static_cast<std::uint8_t>(Tier::kReduced) ||
         t == static_cast<std::uint8_t>(Tier::kNaive);
}

}  // namespace

std::string encode_snapshot(const AnchorSnapshot& snap) {
  detail::ByteWriter out;
  out.raw(kMagic);
  out.u32(kVersion);
  out.u8(static_cast<std::uint8_t>(snap.tier));
  out.u32(snap.capacity);
  out.u64(snap.seed);
  out.u32(snap.working);
  out.u32(static_cast<std::uint32_t>(snap.R.size()));
  out.u32(static_cast<std::uint32_t>(snap.K.size()));
  out.u32s(snap.A);
  out.u32s(snap.K);
  out.u32s(snap.W);
  out.u32s(snap.L);
  out.u32s(snap.R);
  switch (snap.tier) {
    case Tier::kNaive:
      out.u8(static_cast<std::uint8_t>(snap.naive_ordering));
      for (const auto& set : snap.naive_sets) {
        out.u32(static_cast<std::uint32_t>(set.size()));
        out.u32s(set);
      }
      break;
    case Tier::kReduced:
      out.u64(snap.reduced_entries.size());
      for (const auto& [key, value] : snap.reduced_entries) {
        out.u64(key);
        out.u32(value);
      }
      break;
    case Tier::kMinimal:
      break;
  }
  out.seal();
  return out.take();
}

AnchorSnapshot decode_snapshot(std::string_view bytes) {
  detail::ByteReader in(detail::ByteReader::checked(bytes, "anchor snapshot"));
  if (in.raw(kMagic.size()) != kMagic) throw IntegrityError("anchor snapshot: bad magic");
  if (const auto v = in.u32(); v != kVersion) {
    throw IntegrityError("anchor snapshot: unsupported version " + std::to_string(v));
  }
  AnchorSnapshot snap;
  const std::uint8_t tier = in.u8();
  if (!known_tier(tier)) throw IntegrityError("anchor snapshot: unknown tier");
  snap.tier = static_cast<Tier>(tier);
  snap.capacity = in.u32();
  snap.seed = in.u64();
  snap.working = in.u32();
  const std::uint32_t removed = in.u32();
  const std::uint32_t k_len = in.u32();
  if (removed > snap.capacity || (k_len != 0 && k_len != snap.capacity)) {
    throw IntegrityError("anchor snapshot: inconsistent lengths");
  }
  snap.A = in.u32s(snap.capacity);
  snap.K = in.u32s(k_len);
  snap.W = in.u32s(snap.capacity);
  snap.L = in.u32s(snap.capacity);
  snap.R = in.u32s(removed);
  switch (snap.tier) {
    case Tier::kNaive: {
      const std::uint8_t ordering = in.u8();
      if (ordering > 1) throw IntegrityError("anchor snapshot: unknown naive ordering");
      snap.naive_ordering = static_cast<NaiveOrdering>(ordering);
      snap.naive_sets.resize(removed);
      for (auto& set : snap.naive_sets) {
        const std::uint32_t len = in.u32();
        if (len > snap.capacity) throw IntegrityError("anchor snapshot: stored set too long");
        set = in.u32s(len);
      }
      break;
    }
    case Tier::kReduced: {
      const std::uint64_t count = in.u64();
      if (count > in.remaining() / 12) throw IntegrityError("anchor snapshot: entry count overflow");
      snap.reduced_entries.resize(count);
      for (auto& [key, value] : snap.reduced_entries) {
        key = in.u64();
        value = in.u32();
      }
      break;
    }
    case Tier::kMinimal:
      break;
  }
  in.expect_end();
  return snap;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IntegrityError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error("short write to " + path.string());
}

void save_snapshot(const std::filesystem::path& path, const AnchorSnapshot& snap) {
  write_file(path, encode_snapshot(snap));
}

AnchorSnapshot load_snapshot(const std::filesystem::path& path) {
  return decode_snapshot(read_file(path));
}

nlohmann::json snapshot_to_json(const AnchorSnapshot& snap) {
  nlohmann::json j = {
      {"tier", tier_name(snap.tier)},
      {"capacity_a", snap.capacity},
      {"seed", snap.seed},
      {"N", snap.working},
      {"A", snap.A},
      {"K", snap.K},
      {"W", snap.W},
      {"L", snap.L},
      {"R", snap.R},
  };
  if (snap.tier == Tier::kNaive) {
    j["naive_ordering"] = snap.naive_ordering == NaiveOrdering::kAscending ? "ascending" : "replacement";
    j["naive_sets"] = snap.naive_sets;
  } else if (snap.tier == Tier::kReduced) {
    auto& entries = j["reduced_entries"] = nlohmann::json::array();
    for (const auto& [key, value] : snap.reduced_entries) {
      entries.push_back({key >> 32, key & 0xffffffffu, value});
    }
  }
  return j;
}

}  // namespace anchorhash
