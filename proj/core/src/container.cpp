#include "mrc/container.hpp"

#include <algorithm>
#include <string>

#include "mrc/byte_stream.hpp"
#include "mrc/error.hpp"

namespace mrc {

std::vector<std::uint8_t> ContainerFile::encode() const {
  if (levels.empty() || levels.size() > 255) throw ShapeError("container needs 1..255 levels");
  ByteWriter w;
  w.tag("MRC1");
  w.u16(version);
  w.u8(static_cast<std::uint8_t>(scalar));
  w.u8(static_cast<std::uint8_t>(levels.size()));
  w.u32(roi.block);
  w.f64(roi.percent);
  w.u64(roi_mask.selected.size());
  std::vector<std::uint8_t> bits((roi_mask.selected.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < roi_mask.selected.size(); ++i)
    if (roi_mask.selected[i]) bits[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  w.bytes(bits);

  std::vector<std::size_t> offset_slots;
  for (const ContainerLevel& lvl : levels) {
    w.u64(lvl.dims.nx);
    w.u64(lvl.dims.ny);
    w.u64(lvl.dims.nz);
    w.u32(lvl.u);
    w.u64(lvl.coords.size());
    for (const BlockCoord& c : lvl.coords) {
      w.u32(c.bx);
      w.u32(c.by);
      w.u32(c.bz);
    }
    if (lvl.blob) {
      const std::vector<std::uint8_t> blob = lvl.blob->serialize();
      w.u64(blob.size());
      w.bytes(blob);
    } else {
      w.u64(0);
    }
    w.u8(static_cast<std::uint8_t>(lvl.post.family));
    for (const double a : lvl.post.a) w.f64(a);
    offset_slots.push_back(w.size());
    w.u64(0);
  }
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const ContainerLevel& lvl = levels[k];
    if (lvl.samples.empty()) continue;
    w.patch_u64(offset_slots[k], w.size());
    w.tag("MRS1");
    w.u64(lvl.samples.size());
    for (const StoredSample& s : lvl.samples) {
      w.u64(s.region.origin.x);
      w.u64(s.region.origin.y);
      w.u64(s.region.origin.z);
      w.u64(s.region.edge);
      if (s.values.size() != s.region.edge * s.region.edge * s.region.edge) {
        throw ShapeError("stored sample does not hold edge^3 values");
      }
      for (const double v : s.values) w.f64(v);
    }
  }
  return std::move(w).take();
}

ContainerFile ContainerFile::decode(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_tag("MRC1", "container");
  ContainerFile c;
  c.version = r.u16();
  if (c.version != kVersion) throw FormatError("unsupported container version " + std::to_string(c.version));
  const std::uint8_t width = r.u8();
  if (width != 4 && width != 8) throw FormatError("unsupported scalar width " + std::to_string(width));
  c.scalar = static_cast<ScalarType>(width);
  const std::uint8_t nlevels = r.u8();
  if (nlevels == 0) throw FormatError("container holds no levels");
  c.roi.block = r.u32();
  c.roi.percent = r.f64();
  const std::uint64_t nbits = r.u64();
  const auto bits = r.bytes((nbits + 7) / 8);
  c.roi_mask.selected.resize(static_cast<std::size_t>(nbits));
  for (std::size_t i = 0; i < c.roi_mask.selected.size(); ++i) {
    c.roi_mask.selected[i] = (bits[i / 8] >> (i % 8)) & 1u;
  }

  std::vector<std::uint64_t> sample_offsets;
  for (std::uint8_t k = 0; k < nlevels; ++k) {
    ContainerLevel lvl;
    lvl.dims.nx = r.u64();
    lvl.dims.ny = r.u64();
    lvl.dims.nz = r.u64();
    lvl.u = r.u32();
    const std::uint64_t nblocks = r.u64();
    if (nblocks > r.remaining() / 12) throw FormatError("coordinate table truncated");
    lvl.coords.resize(static_cast<std::size_t>(nblocks));
    for (BlockCoord& bc : lvl.coords) {
      bc.bx = r.u32();
      bc.by = r.u32();
      bc.bz = r.u32();
    }
    const std::uint64_t blob_len = r.u64();
    if (blob_len > 0) lvl.blob = CompressedBlob::parse(r.bytes(blob_len));
    const std::uint8_t family = r.u8();
    if (family > static_cast<std::uint8_t>(IntensityFamily::zfp_like)) throw FormatError("unknown post family");
    lvl.post.family = static_cast<IntensityFamily>(family);
    for (double& a : lvl.post.a) a = r.f64();
    sample_offsets.push_back(r.u64());
    c.levels.push_back(std::move(lvl));
  }
  const std::size_t end_of_levels = r.position();

  if (nbits > 0) {
    if (c.roi.block == 0) throw FormatError("ROI mask present without a block size");
    const Dims& d = c.levels.front().dims;
    if (d.nx % c.roi.block || d.ny % c.roi.block || d.nz % c.roi.block) {
      throw FormatError("fine level dims are not divisible by the ROI block size");
    }
    c.roi_mask.grid = {d.nx / c.roi.block, d.ny / c.roi.block, d.nz / c.roi.block};
    if (c.roi_mask.grid.count() != nbits) throw FormatError("ROI mask length does not match the block grid");
  }

  std::size_t furthest = end_of_levels;
  for (std::size_t k = 0; k < c.levels.size(); ++k) {
    if (sample_offsets[k] == 0) continue;
    if (sample_offsets[k] < end_of_levels) throw FormatError("sample section overlaps level table");
    r.seek(static_cast<std::size_t>(sample_offsets[k]));
    r.expect_tag("MRS1", "sample section");
    const std::uint64_t n = r.u64();
    for (std::uint64_t i = 0; i < n; ++i) {
      StoredSample s;
      s.region.origin.x = r.u64();
      s.region.origin.y = r.u64();
      s.region.origin.z = r.u64();
      s.region.edge = r.u64();
      const std::uint64_t cells = std::uint64_t{s.region.edge} * s.region.edge * s.region.edge;
      if (s.region.edge == 0 || s.region.edge > (1u << 20) || cells > r.remaining() / 8) {
        throw FormatError("sample region truncated");
      }
      s.values.resize(static_cast<std::size_t>(cells));
      for (double& v : s.values) v = r.f64();
      c.levels[k].samples.push_back(std::move(s));
    }
    furthest = std::max(furthest, r.position());
  }
  if (furthest != bytes.size()) throw FormatError("trailing bytes after container");
  return c;
}

}  // namespace mrc
