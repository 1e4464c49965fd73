#pragma once

#include <span>
#include <vector>

#include "mrc/codec/blob.hpp"
#include "mrc/codec/error_bound.hpp"
#include "mrc/codec/lossless.hpp"
#include "mrc/grid.hpp"
#include "mrc/layout.hpp"

namespace mrc {

struct CodecOptions {
  LosslessKind lossless = LosslessKind::identity;
};

// Global linear-interpolation predictor over the whole array. Each point is
// predicted from already reconstructed values (see for_each_prediction) and
// quantized with the bound of its interpolation level.
CompressedBlob interp_compress(const Dims& dims, std::span<const double> values,
                               const ErrorBoundPolicy& policy, const CodecOptions& opts = {});
CompressedBlob interp_compress(const Volume& v, const ErrorBoundPolicy& policy,
                               const CodecOptions& opts = {});
CompressedBlob interp_compress(const MergedArray& m, const ErrorBoundPolicy& policy,
                               const CodecOptions& opts = {});

std::vector<double> interp_decompress_values(const CompressedBlob& blob);
Volume interp_decompress(const CompressedBlob& blob);
MergedArray interp_decompress_merged(const CompressedBlob& blob);

}  // namespace mrc
