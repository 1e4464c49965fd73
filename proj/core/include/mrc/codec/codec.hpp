#pragma once

#include <span>
#include <vector>

#include "mrc/codec/blob.hpp"
#include "mrc/codec/block_codec.hpp"
#include "mrc/codec/interp_codec.hpp"

namespace mrc {

CompressedBlob compress(CodecId codec, const Dims& dims, std::span<const double> values,
                        const ErrorBoundPolicy& policy, const CodecOptions& opts = {});
CompressedBlob compress(CodecId codec, const MergedArray& m, const ErrorBoundPolicy& policy,
                        const CodecOptions& opts = {});

// Dispatches on the blob's codec id.
std::vector<double> decompress_values(const CompressedBlob& blob);
Volume decompress_volume(const CompressedBlob& blob);
MergedArray decompress_merged(const CompressedBlob& blob);

}  // namespace mrc
