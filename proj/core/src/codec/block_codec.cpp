#include "mrc/codec/block_codec.hpp"

#include <algorithm>
#include <numeric>

#include "mrc/codec/codec.hpp"
#include "mrc/codec/quantizer.hpp"
#include "mrc/error.hpp"
#include "mrc/parallel.hpp"

namespace mrc {

namespace {

struct BlockSpan {
  std::size_t x0, y0, z0;
  std::size_t ex, ey, ez;  // extent, <= kLorenzoBlock at the high edges
  std::size_t cells() const { return ex * ey * ez; }
};

std::vector<BlockSpan> partition(const Dims& d) {
  const std::size_t b = kLorenzoBlock;
  std::vector<BlockSpan> out;
  for (std::size_t z = 0; z < d.nz; z += b)
    for (std::size_t y = 0; y < d.ny; y += b)
      for (std::size_t x = 0; x < d.nx; x += b)
        out.push_back({x, y, z, std::min(b, d.nx - x), std::min(b, d.ny - y), std::min(b, d.nz - z)});
  return out;
}

// Lorenzo prediction at local (i, j, k) from the block-local reconstruction;
// neighbours outside the block count as zero.
double lorenzo(const double* r, const BlockSpan& s, std::size_t i, std::size_t j, std::size_t k) {
  auto at = [&](std::size_t a, std::size_t b, std::size_t c) { return r[a + s.ex * (b + s.ey * c)]; };
  const double fx = i ? at(i - 1, j, k) : 0.0;
  const double fy = j ? at(i, j - 1, k) : 0.0;
  const double fz = k ? at(i, j, k - 1) : 0.0;
  const double fxy = i && j ? at(i - 1, j - 1, k) : 0.0;
  const double fxz = i && k ? at(i - 1, j, k - 1) : 0.0;
  const double fyz = j && k ? at(i, j - 1, k - 1) : 0.0;
  const double fxyz = i && j && k ? at(i - 1, j - 1, k - 1) : 0.0;
  return fx + fy + fz - fxy - fxz - fyz + fxyz;
}

}  // namespace

CompressedBlob block_compress(const Dims& dims, std::span<const double> values,
                              const ErrorBoundPolicy& policy, const CodecOptions& opts) {
  policy.validate();
  if (dims.count() == 0 || values.size() != dims.count()) {
    throw ShapeError("block_compress: value count does not match dims");
  }
  const std::vector<BlockSpan> blocks = partition(dims);
  std::vector<std::size_t> offset(blocks.size() + 1, 0);
  for (std::size_t i = 0; i < blocks.size(); ++i) offset[i + 1] = offset[i] + blocks[i].cells();

  std::vector<std::int32_t> codes(dims.count());
  std::vector<std::vector<double>> block_literals(blocks.size());
  parallel_for(blocks.size(), [&](std::size_t bi) {
    const BlockSpan& s = blocks[bi];
    std::vector<double> recon(s.cells());
    std::size_t c = 0;
    for (std::size_t k = 0; k < s.ez; ++k)
      for (std::size_t j = 0; j < s.ey; ++j)
        for (std::size_t i = 0; i < s.ex; ++i, ++c) {
          const double actual = values[linear_index(dims, s.x0 + i, s.y0 + j, s.z0 + k)];
          const QuantizedValue q = quantize(lorenzo(recon.data(), s, i, j, k), actual, policy.eb);
          codes[offset[bi] + c] = q.code;
          if (q.code == kLiteralMarker) block_literals[bi].push_back(actual);
          recon[c] = q.recon;
        }
  });

  std::vector<double> literals;
  for (const auto& l : block_literals) literals.insert(literals.end(), l.begin(), l.end());

  CompressedBlob blob;
  blob.codec = CodecId::block_lorenzo;
  blob.dims = dims;
  blob.policy = policy;
  blob.policy.adaptive = false;
  blob.entropy = entropy_encode(codes, literals, opts.lossless);
  return blob;
}

CompressedBlob block_compress(const Volume& v, const ErrorBoundPolicy& policy, const CodecOptions& opts) {
  return block_compress(v.dims(), v.values(), policy, opts);
}

CompressedBlob block_compress(const MergedArray& m, const ErrorBoundPolicy& policy, const CodecOptions& opts) {
  CompressedBlob blob = block_compress(m.dims, m.values, policy, opts);
  attach_layout(blob, m);
  return blob;
}

std::vector<double> block_decompress_values(const CompressedBlob& blob) {
  if (blob.codec != CodecId::block_lorenzo) throw FormatError("blob was not produced by the block codec");
  blob.policy.validate();
  const Dims& dims = blob.dims;
  const EntropyDecoded dec = entropy_decode(blob.entropy, dims.count());
  const std::vector<BlockSpan> blocks = partition(dims);

  std::vector<std::size_t> offset(blocks.size() + 1, 0);
  std::vector<std::size_t> literal_offset(blocks.size() + 1, 0);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    offset[i + 1] = offset[i] + blocks[i].cells();
    const auto first = dec.codes.begin() + static_cast<std::ptrdiff_t>(offset[i]);
    literal_offset[i + 1] =
        literal_offset[i] +
        static_cast<std::size_t>(std::count(first, first + static_cast<std::ptrdiff_t>(blocks[i].cells()), kLiteralMarker));
  }

  std::vector<double> out(dims.count());
  const double eb = blob.policy.eb;
  parallel_for(blocks.size(), [&](std::size_t bi) {
    const BlockSpan& s = blocks[bi];
    std::vector<double> recon(s.cells());
    std::size_t lit = literal_offset[bi];
    std::size_t c = 0;
    for (std::size_t k = 0; k < s.ez; ++k)
      for (std::size_t j = 0; j < s.ey; ++j)
        for (std::size_t i = 0; i < s.ex; ++i, ++c) {
          const std::int32_t code = dec.codes[offset[bi] + c];
          recon[c] = code == kLiteralMarker ? dec.literals[lit++]
                                            : dequantize(lorenzo(recon.data(), s, i, j, k), code, eb);
          out[linear_index(dims, s.x0 + i, s.y0 + j, s.z0 + k)] = recon[c];
        }
  });
  return out;
}

Volume block_decompress(const CompressedBlob& blob) { return Volume(blob.dims, block_decompress_values(blob)); }

CompressedBlob compress(CodecId codec, const Dims& dims, std::span<const double> values,
                        const ErrorBoundPolicy& policy, const CodecOptions& opts) {
  switch (codec) {
    case CodecId::stored:
      return store_uncompressed(dims, values);
    case CodecId::interp:
      return interp_compress(dims, values, policy, opts);
    case CodecId::block_lorenzo:
      return block_compress(dims, values, policy, opts);
  }
  throw FormatError("unknown codec id");
}

CompressedBlob compress(CodecId codec, const MergedArray& m, const ErrorBoundPolicy& policy,
                        const CodecOptions& opts) {
  CompressedBlob blob = compress(codec, m.dims, m.values, policy, opts);
  attach_layout(blob, m);
  return blob;
}

std::vector<double> decompress_values(const CompressedBlob& blob) {
  switch (blob.codec) {
    case CodecId::stored:
      return load_stored(blob);
    case CodecId::interp:
      return interp_decompress_values(blob);
    case CodecId::block_lorenzo:
      return block_decompress_values(blob);
  }
  throw FormatError("unknown codec id");
}

Volume decompress_volume(const CompressedBlob& blob) { return Volume(blob.dims, decompress_values(blob)); }

MergedArray decompress_merged(const CompressedBlob& blob) { return detach_layout(blob, decompress_values(blob)); }

}  // namespace mrc
