#include "mrc/codec/lossless.hpp"

#include <zlib.h>

#include <string>

#include "mrc/byte_stream.hpp"
#include "mrc/error.hpp"

namespace mrc {

LosslessKind parse_lossless_kind(std::string_view name) {
  if (name == "none" || name == "identity") return LosslessKind::identity;
  if (name == "zlib") return LosslessKind::zlib;
  throw ShapeError("unknown lossless pass '" + std::string(name) + "'");
}

std::vector<std::uint8_t> lossless_encode(LosslessKind kind, std::span<const std::uint8_t> data) {
  switch (kind) {
    case LosslessKind::identity:
      return {data.begin(), data.end()};
    case LosslessKind::zlib: {
      uLongf bound = compressBound(static_cast<uLong>(data.size()));
      ByteWriter w;
      w.u64(data.size());
      std::vector<std::uint8_t>& buf = w.buffer();
      buf.resize(8 + bound);
      if (compress2(buf.data() + 8, &bound, data.data(), static_cast<uLong>(data.size()), 6) != Z_OK) {
        throw Error("zlib compression failed");
      }
      buf.resize(8 + bound);
      return std::move(w).take();
    }
  }
  throw FormatError("unknown lossless pass id");
}

std::vector<std::uint8_t> lossless_decode(LosslessKind kind, std::span<const std::uint8_t> data) {
  switch (kind) {
    case LosslessKind::identity:
      return {data.begin(), data.end()};
    case LosslessKind::zlib: {
      ByteReader r(data);
      const std::uint64_t size = r.u64();
      if (size > (std::uint64_t{1} << 40)) throw FormatError("implausible zlib payload size");
      std::vector<std::uint8_t> out(static_cast<std::size_t>(size));
      uLongf len = static_cast<uLongf>(size);
      const auto rest = r.bytes(r.remaining());
      if (uncompress(out.data(), &len, rest.data(), static_cast<uLong>(rest.size())) != Z_OK || len != size) {
        throw FormatError("corrupt zlib payload");
      }
      return out;
    }
  }
  throw FormatError("unknown lossless pass id");
}

}  // namespace mrc
