#include "mrc/codec/interp_codec.hpp"

#include <vector>

#include "mrc/codec/quantizer.hpp"
#include "mrc/codec/schedule.hpp"
#include "mrc/error.hpp"

namespace mrc {

namespace {

double predict(PredictorKind kind, const std::vector<double>& recon, std::size_t left, std::size_t right) {
  switch (kind) {
    case PredictorKind::seed_zero:
      return 0.0;
    case PredictorKind::endpoint:
    case PredictorKind::extrap_one_sided:
      return recon[left];
    case PredictorKind::interp_two_sided:
      return 0.5 * (recon[left] + recon[right]);
  }
  return 0.0;
}

std::vector<double> level_bounds(const ErrorBoundPolicy& policy, unsigned maxlevel) {
  std::vector<double> eb(maxlevel + 1);
  for (unsigned l = 0; l <= maxlevel; ++l) eb[l] = level_error_bound(policy, l, maxlevel);
  return eb;
}

}  // namespace

CompressedBlob interp_compress(const Dims& dims, std::span<const double> values,
                               const ErrorBoundPolicy& policy, const CodecOptions& opts) {
  policy.validate();
  if (dims.count() == 0 || values.size() != dims.count()) {
    throw ShapeError("interp_compress: value count does not match dims");
  }
  const std::vector<double> eb = level_bounds(policy, schedule_maxlevel(dims));

  std::vector<double> recon(values.size(), 0.0);
  std::vector<std::int32_t> codes;
  codes.reserve(values.size());
  std::vector<double> literals;
  for_each_prediction(dims, [&](unsigned level, std::size_t idx, PredictorKind kind, std::size_t left,
                                std::size_t right) {
    const QuantizedValue q = quantize(predict(kind, recon, left, right), values[idx], eb[level]);
    codes.push_back(q.code);
    if (q.code == kLiteralMarker) literals.push_back(values[idx]);
    recon[idx] = q.recon;
  });

  CompressedBlob blob;
  blob.codec = CodecId::interp;
  blob.dims = dims;
  blob.policy = policy;
  blob.entropy = entropy_encode(codes, literals, opts.lossless);
  return blob;
}

CompressedBlob interp_compress(const Volume& v, const ErrorBoundPolicy& policy, const CodecOptions& opts) {
  return interp_compress(v.dims(), v.values(), policy, opts);
}

CompressedBlob interp_compress(const MergedArray& m, const ErrorBoundPolicy& policy, const CodecOptions& opts) {
  CompressedBlob blob = interp_compress(m.dims, m.values, policy, opts);
  attach_layout(blob, m);
  return blob;
}

std::vector<double> interp_decompress_values(const CompressedBlob& blob) {
  if (blob.codec != CodecId::interp) throw FormatError("blob was not produced by the interpolation codec");
  blob.policy.validate();
  const Dims& dims = blob.dims;
  const EntropyDecoded dec = entropy_decode(blob.entropy, dims.count());
  const std::vector<double> eb = level_bounds(blob.policy, schedule_maxlevel(dims));

  std::vector<double> recon(dims.count(), 0.0);
  std::size_t next_code = 0;
  std::size_t next_literal = 0;
  for_each_prediction(dims, [&](unsigned level, std::size_t idx, PredictorKind kind, std::size_t left,
                                std::size_t right) {
    const std::int32_t code = dec.codes[next_code++];
    recon[idx] = code == kLiteralMarker ? dec.literals[next_literal++]
                                        : dequantize(predict(kind, recon, left, right), code, eb[level]);
  });
  return recon;
}

Volume interp_decompress(const CompressedBlob& blob) {
  return Volume(blob.dims, interp_decompress_values(blob));
}

MergedArray interp_decompress_merged(const CompressedBlob& blob) {
  return detach_layout(blob, interp_decompress_values(blob));
}

}  // namespace mrc
