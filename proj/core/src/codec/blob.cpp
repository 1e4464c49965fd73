#include "mrc/codec/blob.hpp"

#include <string>

#include "mrc/error.hpp"

namespace mrc {

void CompressedBlob::write(ByteWriter& w) const {
  w.tag("MRB1");
  w.u8(static_cast<std::uint8_t>(codec));
  w.u64(dims.nx);
  w.u64(dims.ny);
  w.u64(dims.nz);
  w.f64(policy.eb);
  w.u8(policy.adaptive ? 1 : 0);
  w.f64(policy.alpha);
  w.f64(policy.beta);
  w.u8(static_cast<std::uint8_t>(arrangement));
  w.u8(padded ? 1 : 0);
  w.u32(u);
  w.u64(order.size());
  for (const BlockCoord& c : order) {
    w.u32(c.bx);
    w.u32(c.by);
    w.u32(c.bz);
  }
  w.u64(entropy.literal_count);
  entropy.table.write(w);
  w.u64(entropy.payload.size());
  w.bytes(entropy.payload);
}

std::vector<std::uint8_t> CompressedBlob::serialize() const {
  ByteWriter w;
  write(w);
  return std::move(w).take();
}

CompressedBlob CompressedBlob::read(ByteReader& r) {
  r.expect_tag("MRB1", "compressed blob");
  CompressedBlob b;
  const std::uint8_t codec = r.u8();
  if (codec > static_cast<std::uint8_t>(CodecId::block_lorenzo)) {
    throw FormatError("unknown codec id " + std::to_string(codec));
  }
  b.codec = static_cast<CodecId>(codec);
  b.dims.nx = r.u64();
  b.dims.ny = r.u64();
  b.dims.nz = r.u64();
  b.policy.eb = r.f64();
  b.policy.adaptive = r.u8() != 0;
  b.policy.alpha = r.f64();
  b.policy.beta = r.f64();
  const std::uint8_t arrangement = r.u8();
  if (arrangement > static_cast<std::uint8_t>(Arrangement::stacked)) {
    throw FormatError("unknown arrangement id " + std::to_string(arrangement));
  }
  b.arrangement = static_cast<Arrangement>(arrangement);
  b.padded = r.u8() != 0;
  b.u = r.u32();
  const std::uint64_t nblocks = r.u64();
  if (nblocks > r.remaining() / 12) throw FormatError("block order table truncated");
  b.order.resize(static_cast<std::size_t>(nblocks));
  for (BlockCoord& c : b.order) {
    c.bx = r.u32();
    c.by = r.u32();
    c.bz = r.u32();
  }
  b.entropy.literal_count = r.u64();
  b.entropy.table = HuffmanTable::read(r);
  const std::uint64_t len = r.u64();
  const auto payload = r.bytes(len);
  b.entropy.payload.assign(payload.begin(), payload.end());

  if (b.dims.nx == 0 || b.dims.ny == 0 || b.dims.nz == 0) throw FormatError("blob has empty dims");
  if (b.dims.nx > (1u << 30) || b.dims.ny > (1u << 30) || b.dims.nz > (1u << 30)) {
    throw FormatError("blob dims are implausibly large");
  }
  return b;
}

CompressedBlob CompressedBlob::parse(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  CompressedBlob b = read(r);
  if (r.remaining() != 0) throw FormatError("trailing bytes after compressed blob");
  return b;
}

CompressedBlob store_uncompressed(const Dims& dims, std::span<const double> values) {
  if (values.size() != dims.count()) throw ShapeError("stored values do not match dims");
  CompressedBlob b;
  b.codec = CodecId::stored;
  b.dims = dims;
  ByteWriter w;
  for (const double v : values) w.f64(v);
  b.entropy.payload = std::move(w).take();
  return b;
}

std::vector<double> load_stored(const CompressedBlob& blob) {
  if (blob.codec != CodecId::stored) throw FormatError("blob is not stored raw");
  if (blob.entropy.payload.size() != blob.dims.count() * 8) throw FormatError("stored payload size mismatch");
  ByteReader r(blob.entropy.payload);
  std::vector<double> out(blob.dims.count());
  for (double& v : out) v = r.f64();
  return out;
}

void attach_layout(CompressedBlob& blob, const MergedArray& m) {
  blob.arrangement = m.arrangement;
  blob.padded = m.padded;
  blob.u = m.u;
  blob.order = m.order;
}

MergedArray detach_layout(const CompressedBlob& blob, std::vector<double> values) {
  if (blob.arrangement == Arrangement::none) throw StateError("blob carries no merged-array layout");
  MergedArray m;
  m.dims = blob.dims;
  m.values = std::move(values);
  m.order = blob.order;
  m.padded = blob.padded;
  m.u = blob.u;
  m.arrangement = blob.arrangement;
  return m;
}

}  // namespace mrc
