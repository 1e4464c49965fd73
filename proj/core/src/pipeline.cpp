#include "mrc/pipeline.hpp"

#include <cmath>
#include <string>

#include "mrc/codec/block_codec.hpp"
#include "mrc/codec/codec.hpp"
#include "mrc/error.hpp"
#include "mrc/layout.hpp"
#include "mrc/parallel.hpp"

namespace mrc {

std::size_t post_blocksize(CodecId codec, std::uint32_t u) {
  return codec == CodecId::block_lorenzo ? kLorenzoBlock : u;
}

namespace {

std::vector<double> flatten(const std::vector<UnitBlock>& blocks) {
  std::vector<double> out;
  for (const UnitBlock& b : blocks) out.insert(out.end(), b.data.begin(), b.data.end());
  return out;
}

std::vector<BlockCoord> coords_of(const std::vector<UnitBlock>& blocks) {
  std::vector<BlockCoord> out;
  out.reserve(blocks.size());
  for (const UnitBlock& b : blocks) out.push_back(b.coord);
  return out;
}

MergedArray merge(const std::vector<UnitBlock>& blocks, Arrangement arrangement) {
  return arrangement == Arrangement::stacked ? stack_merge(blocks) : linear_merge(blocks);
}

std::vector<UnitBlock> restore_blocks(const CompressedBlob& blob, const std::vector<BlockCoord>& coords) {
  MergedArray m = decompress_merged(blob);
  if (m.padded) m = unpad(m);
  std::vector<UnitBlock> blocks = unmerge(m);
  if (coords_of(blocks) != coords) throw FormatError("blob block order disagrees with the level table");
  return blocks;
}

}  // namespace

LevelCanvas level_canvas(const Level& level) {
  LevelCanvas c;
  c.dims = level.dims;
  c.values.assign(level.dims.count(), 0.0);
  c.presence.block = level.u;
  c.presence.grid = block_grid(level.dims, level.u);
  c.presence.present.assign(c.presence.grid.count(), 0);
  const std::size_t u = level.u;
  for (const UnitBlock& b : level.blocks) {
    c.presence.present[linear_index(c.presence.grid, b.coord.bx, b.coord.by, b.coord.bz)] = 1;
    for (std::size_t z = 0; z < u; ++z)
      for (std::size_t y = 0; y < u; ++y) {
        const auto src = b.data.begin() + static_cast<std::ptrdiff_t>(u * (y + u * z));
        std::copy(src, src + static_cast<std::ptrdiff_t>(u),
                  c.values.begin() + static_cast<std::ptrdiff_t>(linear_index(
                                         c.dims, b.coord.bx * u, b.coord.by * u + y, b.coord.bz * u + z)));
      }
  }
  return c;
}

void canvas_to_blocks(const LevelCanvas& canvas, Level& level) {
  const std::size_t u = level.u;
  for (UnitBlock& b : level.blocks) {
    auto dst = b.data.begin();
    for (std::size_t z = 0; z < u; ++z)
      for (std::size_t y = 0; y < u; ++y) {
        const auto src = canvas.values.begin() + static_cast<std::ptrdiff_t>(linear_index(
                                                     canvas.dims, b.coord.bx * u, b.coord.by * u + y, b.coord.bz * u + z));
        dst = std::copy(src, src + static_cast<std::ptrdiff_t>(u), dst);
      }
  }
}

ContainerFile store_dataset(const MultiResDataset& ds, ScalarType scalar) {
  ContainerFile c;
  c.scalar = scalar;
  c.roi = ds.roi;
  c.roi_mask = ds.roi_mask;
  for (const Level& lvl : ds.levels) {
    ContainerLevel out;
    out.dims = lvl.dims;
    out.u = lvl.u;
    out.coords = coords_of(lvl.blocks);
    if (!lvl.blocks.empty()) {
      const MergedArray m = linear_merge(lvl.blocks);
      CompressedBlob blob = store_uncompressed(m.dims, m.values);
      attach_layout(blob, m);
      out.blob = std::move(blob);
    }
    c.levels.push_back(std::move(out));
  }
  return c;
}

namespace {

ContainerLevel compress_level(const Level& lvl, std::size_t k, const CompressOptions& opts, LevelReport& report) {
  ContainerLevel out;
  out.dims = lvl.dims;
  out.u = lvl.u;
  out.coords = coords_of(lvl.blocks);
  report.level = k;
  report.blocks = lvl.blocks.size();
  if (lvl.blocks.empty()) return out;

  MergedArray m = merge(lvl.blocks, opts.arrangement);
  if (opts.codec == CodecId::interp && opts.pad == PadMode::automatic && m.arrangement == Arrangement::linear) {
    m = pad_linear(m);
  }
  report.merged_dims = m.dims;
  report.padded = m.padded;
  CompressedBlob blob = compress(opts.codec, m, opts.policy, opts.codec_options);
  report.compressed_bytes = blob.serialize().size();

  Level recon{lvl.dims, lvl.u, restore_blocks(blob, out.coords)};
  const std::vector<double> orig_flat = flatten(lvl.blocks);
  const std::vector<double> recon_flat = flatten(recon.blocks);
  report.max_error = max_abs_error(orig_flat, recon_flat);
  report.psnr_db = psnr(orig_flat, recon_flat);

  const bool want_post = opts.post != IntensityFamily::off && opts.codec != CodecId::stored;
  if (want_post || opts.keep_samples) {
    const std::size_t pbs = post_blocksize(opts.codec, lvl.u);
    const LevelCanvas orig_canvas = level_canvas(lvl);
    const LevelCanvas recon_canvas = level_canvas(recon);
    try {
      const SamplingPlan plan =
          make_sampling_plan(orig_canvas.dims, pbs, opts.seed + k, orig_canvas.presence, opts.sample_rate);
      report.sample_regions = plan.regions.size();
      if (opts.keep_samples) {
        for (const SampleRegion& r : plan.regions) {
          const Volume v = extract_region(orig_canvas.values, orig_canvas.dims, r);
          out.samples.push_back({r, {v.values().begin(), v.values().end()}});
        }
      }
      if (want_post) {
        out.post = select_intensity(extract_regions(orig_canvas.values, orig_canvas.dims, plan.regions),
                                    extract_regions(recon_canvas.values, recon_canvas.dims, plan.regions),
                                    opts.policy.eb, pbs, opts.post);
      }
    } catch (const SamplingError&) {
      report.post_skipped = want_post;
    }
  }
  report.post = out.post;
  out.blob = std::move(blob);
  return out;
}

}  // namespace

ContainerFile compress_dataset(const MultiResDataset& ds, ScalarType scalar, const CompressOptions& opts,
                               std::vector<LevelReport>* reports) {
  opts.policy.validate();
  if (!(opts.sample_rate > 0.0 && opts.sample_rate <= kMaxSamplingRate)) {
    throw ShapeError("sample rate must lie in (0, 0.05]");
  }
  ContainerFile c;
  c.scalar = scalar;
  c.roi = ds.roi;
  c.roi_mask = ds.roi_mask;
  c.levels.resize(ds.levels.size());
  std::vector<LevelReport> local(ds.levels.size());
  parallel_for(ds.levels.size(), [&](std::size_t k) { c.levels[k] = compress_level(ds.levels[k], k, opts, local[k]); });
  if (reports) *reports = std::move(local);
  return c;
}

MultiResDataset decompress_dataset(const ContainerFile& c) {
  MultiResDataset ds;
  ds.roi = c.roi;
  ds.roi_mask = c.roi_mask;
  ds.levels.resize(c.levels.size());
  parallel_for(c.levels.size(), [&](std::size_t k) {
    const ContainerLevel& in = c.levels[k];
    Level& lvl = ds.levels[k];
    lvl.dims = in.dims;
    lvl.u = in.u;
    if (!in.blob) {
      if (!in.coords.empty()) throw FormatError("level lists blocks but carries no blob");
      return;
    }
    lvl.blocks = restore_blocks(*in.blob, in.coords);
    if (in.post.enabled()) {
      LevelCanvas canvas = level_canvas(lvl);
      canvas.values = apply_postprocess(canvas.values, canvas.dims, in.blob->policy.eb,
                                        post_blocksize(in.blob->codec, in.u), in.post, &canvas.presence);
      canvas_to_blocks(canvas, lvl);
    }
  });
  validate_coverage(ds);
  return ds;
}

SampledErrors stored_sample_errors(const ContainerFile& c, const MultiResDataset& decompressed) {
  SampledErrors out;
  for (std::size_t k = 0; k < c.levels.size(); ++k) {
    if (c.levels[k].samples.empty()) continue;
    const LevelCanvas canvas = level_canvas(decompressed.levels.at(k));
    for (const StoredSample& s : c.levels[k].samples) {
      const Volume dec = extract_region(canvas.values, canvas.dims, s.region);
      const auto e = sample_errors(s.values, dec.values());
      out.errors.insert(out.errors.end(), e.begin(), e.end());
      out.values.insert(out.values.end(), dec.values().begin(), dec.values().end());
    }
  }
  return out;
}

DatasetMetrics evaluate_dataset(const MultiResDataset& original, const MultiResDataset& decompressed,
                                const Volume& reference, std::uint64_t original_bytes, std::uint64_t compressed_bytes) {
  if (original.levels.size() != decompressed.levels.size()) throw ShapeError("datasets differ in level count");
  DatasetMetrics m;
  m.original_bytes = original_bytes;
  m.compressed_bytes = compressed_bytes;
  m.cr = compression_ratio(original_bytes, compressed_bytes);
  for (std::size_t k = 0; k < original.levels.size(); ++k) {
    const auto a = flatten(original.levels[k].blocks);
    const auto b = flatten(decompressed.levels[k].blocks);
    if (a.size() != b.size()) throw ShapeError("level " + std::to_string(k) + " differs in size");
    m.level_psnr.push_back(a.empty() ? std::nan("") : psnr(a, b));
    m.level_max_error.push_back(a.empty() ? 0.0 : max_abs_error(a, b));
  }
  const Volume uniform = reconstruct_uniform(decompressed);
  m.uniform_psnr = psnr(reference, uniform);
  const Dims& d = reference.dims();
  m.uniform_ssim = (d.nx >= kSsimWindow && d.ny >= kSsimWindow && d.nz >= kSsimWindow) ? ssim(reference, uniform)
                                                                                        : std::nan("");
  return m;
}

}  // namespace mrc
