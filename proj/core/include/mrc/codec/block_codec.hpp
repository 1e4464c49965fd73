#pragma once

#include <span>
#include <vector>

#include "mrc/codec/blob.hpp"
#include "mrc/codec/interp_codec.hpp"
#include "mrc/grid.hpp"

namespace mrc {

// Edge of the independent blocks used by the Lorenzo codec.
inline constexpr std::size_t kLorenzoBlock = 4;

// Block-wise codec: the array is cut into 4³ blocks (partial at the high
// edges), each predicted by a 3D Lorenzo stencil that treats cells outside the
// block as zero. Blocks never read each other, so they are coded in parallel
// and concatenated in block-index order. The bound is uniform (no levels).
CompressedBlob block_compress(const Dims& dims, std::span<const double> values,
                              const ErrorBoundPolicy& policy, const CodecOptions& opts = {});
CompressedBlob block_compress(const Volume& v, const ErrorBoundPolicy& policy,
                              const CodecOptions& opts = {});
CompressedBlob block_compress(const MergedArray& m, const ErrorBoundPolicy& policy,
                              const CodecOptions& opts = {});

std::vector<double> block_decompress_values(const CompressedBlob& blob);
Volume block_decompress(const CompressedBlob& blob);

}  // namespace mrc
