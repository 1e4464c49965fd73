#include "mrc_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mrc/container.hpp"
#include "mrc/error.hpp"
#include "mrc/metrics.hpp"
#include "mrc/parallel.hpp"
#include "mrc/pipeline.hpp"
#include "mrc/raw_io.hpp"
#include "mrc/roi.hpp"
#include "mrc/uncertainty.hpp"

namespace mrc::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

Dims parse_dims(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), 'x', ' ');
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  Dims d{};
  if (!(in >> d.nx >> d.ny >> d.nz) || !(in >> std::ws).eof() || d.count() == 0) {
    throw ShapeError("--dims expects NXxNYxNZ with positive extents, got '" + text + "'");
  }
  return d;
}

std::string dims_str(const Dims& d) {
  return std::to_string(d.nx) + "x" + std::to_string(d.ny) + "x" + std::to_string(d.nz);
}

std::string fmt(double x, int precision = 6) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(precision) << x;
  return s.str();
}

// JSON numbers cannot hold infinities; they are written as strings.
ordered_json json_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return nullptr;
  return x;
}

void write_text(const fs::path& path, const std::string& text) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

bool has_container_magic(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 4 && std::equal(bytes.begin(), bytes.begin() + 4, "MRC1");
}

ContainerFile read_container(const fs::path& path) { return ContainerFile::decode(read_file(path)); }

CodecId parse_codec(const std::string& name) {
  if (name == "interp") return CodecId::interp;
  if (name == "block") return CodecId::block_lorenzo;
  throw ShapeError("unknown codec '" + name + "' (expected interp or block)");
}

const char* codec_name(CodecId c) {
  switch (c) {
    case CodecId::stored:
      return "stored";
    case CodecId::interp:
      return "interp";
    case CodecId::block_lorenzo:
      return "block";
  }
  return "?";
}

const char* family_name(IntensityFamily f) {
  switch (f) {
    case IntensityFamily::off:
      return "off";
    case IntensityFamily::sz_like:
      return "sz";
    case IntensityFamily::zfp_like:
      return "zfp";
  }
  return "?";
}

std::uint64_t dataset_cells(const MultiResDataset& ds) {
  std::uint64_t n = 0;
  for (const Level& lvl : ds.levels) n += lvl.blocks.size() * std::uint64_t{lvl.u} * lvl.u * lvl.u;
  return n;
}

void print_densities(std::ostream& out, const MultiResDataset& ds) {
  const auto dens = level_densities(ds);
  for (std::size_t k = 0; k < ds.levels.size(); ++k) {
    out << "level " << k << ": dims " << dims_str(ds.levels[k].dims) << ", u " << ds.levels[k].u << ", blocks "
        << ds.levels[k].blocks.size() << ", density " << fmt(100.0 * dens[k], 4) << "%\n";
  }
}

// ---- roi ----

struct RoiArgs {
  std::string input, dims, dtype = "f32", out;
  std::uint32_t block = 16;
  double percent = 15.0;
};

int cmd_roi(const RoiArgs& a, std::ostream& out) {
  const ScalarType scalar = parse_scalar_type(a.dtype);
  const Volume v = read_raw(a.input, parse_dims(a.dims), scalar);
  const RoiConfig cfg{a.block, a.percent};
  const RoiMask mask = select_roi(v, cfg);
  const MultiResDataset ds = build_adaptive(v, mask, cfg);
  write_file_atomic(a.out, store_dataset(ds, scalar).encode());
  out << "roi: " << mask.count() << " of " << mask.selected.size() << " blocks selected (block " << a.block
      << ", " << fmt(a.percent) << "%)\n";
  print_densities(out, ds);
  return kOk;
}

// ---- compress ----

struct CompressArgs {
  std::string input, dims, dtype = "f32", out;
  std::string codec = "interp", pad = "auto", arrangement = "linear", post = "off", lossless = "zlib";
  std::uint32_t block = 16;
  double eb = 1e-3, alpha = 2.25, beta = 8.0, sample_rate = kMaxSamplingRate;
  bool adaptive = false, keep_samples = false;
  std::uint64_t seed = 0;
};

int cmd_compress(const CompressArgs& a, std::ostream& out) {
  CompressOptions opts;
  opts.codec = parse_codec(a.codec);
  opts.policy = {a.eb, a.adaptive, a.alpha, a.beta};
  opts.policy.validate();
  if (a.pad != "auto" && a.pad != "off") throw ShapeError("--pad expects auto or off");
  opts.pad = a.pad == "auto" ? PadMode::automatic : PadMode::off;
  if (a.arrangement != "linear" && a.arrangement != "stacked") throw ShapeError("--arrangement expects linear or stacked");
  opts.arrangement = a.arrangement == "linear" ? Arrangement::linear : Arrangement::stacked;
  opts.post = parse_intensity_family(a.post);
  opts.sample_rate = a.sample_rate;
  opts.keep_samples = a.keep_samples;
  opts.seed = a.seed;
  opts.codec_options.lossless = parse_lossless_kind(a.lossless);

  const std::vector<std::uint8_t> bytes = read_file(a.input);
  MultiResDataset ds;
  ScalarType scalar;
  if (has_container_magic(bytes)) {
    const ContainerFile c = ContainerFile::decode(bytes);
    scalar = c.scalar;
    ds = decompress_dataset(c);
  } else {
    if (a.dims.empty()) throw ShapeError("raw input needs --dims");
    scalar = parse_scalar_type(a.dtype);
    const Volume v = decode_raw(bytes, parse_dims(a.dims), scalar);
    // A raw volume becomes a single fully refined level.
    const RoiConfig cfg{a.block, 100.0};
    ds = build_adaptive(v, select_roi(v, cfg), cfg);
  }

  std::vector<LevelReport> reports;
  const ContainerFile c = compress_dataset(ds, scalar, opts, &reports);
  const std::vector<std::uint8_t> encoded = c.encode();
  write_file_atomic(a.out, encoded);

  const std::uint64_t original = dataset_cells(ds) * scalar_bytes(scalar);
  out << "codec " << codec_name(opts.codec) << ", eb " << fmt(a.eb) << (a.adaptive ? " (adaptive)" : "")
      << ", post " << family_name(opts.post) << ", lossless " << a.lossless << '\n';
  for (const LevelReport& r : reports) {
    out << "level " << r.level << ": blocks " << r.blocks;
    if (r.blocks == 0) {
      out << " (empty)\n";
      continue;
    }
    out << ", merged " << dims_str(r.merged_dims) << ", padding " << (r.padded ? "applied" : "not applied")
        << ", bytes " << r.compressed_bytes << ", max error " << fmt(r.max_error) << ", psnr "
        << fmt(r.psnr_db) << " dB";
    if (opts.post != IntensityFamily::off) {
      if (r.post_skipped) {
        out << ", post skipped (no sample fits under the rate cap)";
      } else {
        out << ", post a = (" << fmt(r.post.a[0]) << ", " << fmt(r.post.a[1]) << ", " << fmt(r.post.a[2]) << ")";
      }
    }
    if (r.sample_regions) out << ", sample regions " << r.sample_regions;
    out << '\n';
  }
  out << "original bytes " << original << ", container bytes " << encoded.size() << ", CR "
      << fmt(compression_ratio(original, encoded.size())) << '\n';
  return kOk;
}

// ---- decompress ----

struct DecompressArgs {
  std::string input, out, dtype;
  bool uniform = false;
};

int cmd_decompress(const DecompressArgs& a, std::ostream& out) {
  const ContainerFile c = read_container(a.input);
  const MultiResDataset ds = decompress_dataset(c);
  if (a.uniform) {
    const ScalarType scalar = a.dtype.empty() ? c.scalar : parse_scalar_type(a.dtype);
    const Volume v = reconstruct_uniform(ds);
    write_raw(a.out, v.values(), scalar);
    out << "wrote uniform " << dims_str(v.dims()) << " volume (" << (scalar == ScalarType::f32 ? "f32" : "f64")
        << ")\n";
  } else {
    write_file_atomic(a.out, store_dataset(ds, c.scalar).encode());
    out << "wrote uncompressed container with " << ds.levels.size() << " levels\n";
  }
  print_densities(out, ds);
  return kOk;
}

// ---- uncertainty ----

struct UncertaintyArgs {
  std::string input, orig, dtype, out;
  double isovalue = 0.0, window = kDefaultWindow;
};

int cmd_uncertainty(const UncertaintyArgs& a, std::ostream& out) {
  const ContainerFile c = read_container(a.input);
  const MultiResDataset ds = decompress_dataset(c);
  const Volume decomp = reconstruct_uniform(ds);

  std::vector<double> errors, values;
  std::string source;
  if (!a.orig.empty()) {
    const ScalarType scalar = a.dtype.empty() ? c.scalar : parse_scalar_type(a.dtype);
    const Volume orig = read_raw(a.orig, decomp.dims(), scalar);
    errors = sample_errors(orig.values(), decomp.values());
    values.assign(decomp.values().begin(), decomp.values().end());
    source = "orig";
  } else {
    SampledErrors se = stored_sample_errors(c, ds);
    if (se.errors.empty()) {
      throw ShapeError("container holds no stored samples; pass --orig or compress with --keep-samples");
    }
    errors = std::move(se.errors);
    values = std::move(se.values);
    source = "stored-samples";
  }
  const ErrorModel model = fit_model(errors, values, a.isovalue, a.window);
  const ProbabilityField field = probability_field(decomp, a.isovalue, model);
  write_raw(a.out, field.p, ScalarType::f32);

  ordered_json side;
  side["dims"] = {field.dims.nx, field.dims.ny, field.dims.nz};
  side["dtype"] = "f32";
  side["isovalue"] = a.isovalue;
  side["mu"] = model.mu;
  side["sigma2"] = model.sigma2;
  side["window"] = model.window;
  side["n_samples"] = model.n_samples;
  side["fallback"] = model.fallback;
  side["error_source"] = source;
  write_text(a.out + ".json", side.dump(2) + "\n");

  std::size_t positive = 0;
  for (const double p : field.p) positive += p > 0.0;
  out << "error model: mu " << fmt(model.mu) << ", sigma2 " << fmt(model.sigma2) << ", samples "
      << model.n_samples << (model.fallback ? " (window fallback)" : "") << '\n';
  out << "cells with p > 0: " << positive << " of " << field.p.size() << '\n';
  return kOk;
}

// ---- eval ----

struct EvalArgs {
  std::string orig, recon, dims, dtype = "f32", container, out;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const ScalarType scalar = parse_scalar_type(a.dtype);
  const Dims d = parse_dims(a.dims);
  const Volume orig = read_raw(a.orig, d, scalar);
  const Volume recon = read_raw(a.recon, d, scalar);

  ordered_json j;
  j["dims"] = {d.nx, d.ny, d.nz};
  j["psnr"] = json_number(psnr(orig, recon));
  const bool windowed = d.nx >= kSsimWindow && d.ny >= kSsimWindow && d.nz >= kSsimWindow;
  j["ssim"] = windowed ? json_number(ssim(orig, recon)) : ordered_json(nullptr);
  j["max_abs_error"] = max_abs_error(orig.values(), recon.values());
  if (!a.container.empty()) {
    const std::uint64_t original = orig.size() * scalar_bytes(scalar);
    const std::uint64_t compressed = fs::file_size(a.container);
    j["original_bytes"] = original;
    j["compressed_bytes"] = compressed;
    j["cr"] = compression_ratio(original, compressed);
  }
  const std::string text = j.dump(2) + "\n";
  if (a.out.empty()) {
    out << text;
  } else {
    write_text(a.out, text);
    out << "wrote " << a.out << '\n';
  }
  return kOk;
}

// ---- sweep ----

struct SweepArgs {
  std::string input, dims, dtype = "f32", codec = "interp", post = "off", lossless = "zlib", out, csv;
  std::vector<double> ebs{1e-1, 1e-2, 1e-3, 1e-4};
  bool adaptive = false;
  double alpha = 2.25, beta = 8.0;
  std::uint64_t seed = 0;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const ScalarType scalar = parse_scalar_type(a.dtype);
  const Volume v = read_raw(a.input, parse_dims(a.dims), scalar);
  SweepOptions opts;
  opts.codec = parse_codec(a.codec);
  opts.policy = {1.0, a.adaptive, a.alpha, a.beta};
  opts.codec_options.lossless = parse_lossless_kind(a.lossless);
  opts.post = parse_intensity_family(a.post);
  opts.seed = a.seed;
  opts.original_scalar_bytes = scalar_bytes(scalar);
  const auto points = rd_sweep(v, a.ebs, opts);
  const std::string lines = to_json_lines(points);
  if (a.out.empty()) {
    out << lines;
  } else {
    write_text(a.out, lines);
  }
  if (!a.csv.empty()) write_text(a.csv, to_csv(points));
  if (!a.out.empty()) {
    for (const auto& p : points) {
      out << "eb " << fmt(p.eb) << ": CR " << fmt(p.cr) << ", PSNR " << fmt(p.psnr_db) << " dB, SSIM "
          << fmt(p.ssim) << '\n';
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-resolution error-bounded compression toolkit", "mrc"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (overrides MRC_THREADS)")->check(CLI::PositiveNumber);

  RoiArgs roi;
  auto* c_roi = app.add_subcommand("roi", "Convert a raw volume into a two-level adaptive container");
  c_roi->add_option("--input", roi.input, "Raw input volume")->required();
  c_roi->add_option("--dims", roi.dims, "NXxNYxNZ")->required();
  c_roi->add_option("--dtype", roi.dtype, "f32 or f64")->capture_default_str();
  c_roi->add_option("--block", roi.block, "ROI block edge (power of two >= 8)")->capture_default_str();
  c_roi->add_option("--percent", roi.percent, "Percent of blocks kept at full resolution")->capture_default_str();
  c_roi->add_option("--out", roi.out, "Output container")->required();

  CompressArgs comp;
  auto* c_comp = app.add_subcommand("compress", "Compress a container or raw volume");
  c_comp->add_option("--input", comp.input, "Container or raw volume")->required();
  c_comp->add_option("--dims", comp.dims, "NXxNYxNZ (raw input only)");
  c_comp->add_option("--dtype", comp.dtype, "f32 or f64 (raw input only)")->capture_default_str();
  c_comp->add_option("--block", comp.block, "Unit block edge for raw input")->capture_default_str();
  c_comp->add_option("--codec", comp.codec, "interp or block")->capture_default_str();
  c_comp->add_option("--eb", comp.eb, "Absolute error bound")->capture_default_str();
  c_comp->add_flag("--adaptive-eb", comp.adaptive, "Tighten the bound on early interpolation levels");
  c_comp->add_option("--alpha", comp.alpha, "Adaptive bound growth factor")->capture_default_str();
  c_comp->add_option("--beta", comp.beta, "Adaptive bound cap")->capture_default_str();
  c_comp->add_option("--pad", comp.pad, "auto or off")->capture_default_str();
  c_comp->add_option("--arrangement", comp.arrangement, "linear or stacked")->capture_default_str();
  c_comp->add_option("--sample-rate", comp.sample_rate, "Sampling rate cap for the intensity search")
      ->capture_default_str();
  c_comp->add_option("--post", comp.post, "sz, zfp or off")->capture_default_str();
  c_comp->add_flag("--keep-samples", comp.keep_samples, "Store sampled original regions in the container");
  c_comp->add_option("--lossless", comp.lossless, "none or zlib")->capture_default_str();
  c_comp->add_option("--seed", comp.seed, "Sampling seed")->capture_default_str();
  c_comp->add_option("--out", comp.out, "Output container")->required();

  DecompressArgs dec;
  auto* c_dec = app.add_subcommand("decompress", "Decompress a container");
  c_dec->add_option("--input", dec.input, "Compressed container")->required();
  c_dec->add_option("--out", dec.out, "Output container, or raw volume with --uniform")->required();
  c_dec->add_flag("--uniform", dec.uniform, "Reconstruct a uniform raw volume");
  c_dec->add_option("--dtype", dec.dtype, "Raw output type (default: the container's)");

  UncertaintyArgs unc;
  auto* c_unc = app.add_subcommand("uncertainty", "Isosurface crossing probabilities from compression error");
  c_unc->add_option("--input", unc.input, "Compressed container")->required();
  c_unc->add_option("--orig", unc.orig, "Original raw volume (default: stored samples)");
  c_unc->add_option("--dtype", unc.dtype, "Type of --orig (default: the container's)");
  c_unc->add_option("--isovalue", unc.isovalue, "Isovalue")->required();
  c_unc->add_option("--window", unc.window, "Half-width of the value window, fraction of range")
      ->capture_default_str();
  c_unc->add_option("--out", unc.out, "Output f32 raw field; a .json sidecar is written next to it")->required();

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "PSNR, SSIM and CR of a reconstruction");
  c_eval->add_option("--orig", ev.orig, "Original raw volume")->required();
  c_eval->add_option("--recon", ev.recon, "Reconstructed raw volume")->required();
  c_eval->add_option("--dims", ev.dims, "NXxNYxNZ")->required();
  c_eval->add_option("--dtype", ev.dtype, "f32 or f64")->capture_default_str();
  c_eval->add_option("--container", ev.container, "Compressed file used for CR");
  c_eval->add_option("--out", ev.out, "JSON output (default: stdout)");

  SweepArgs sw;
  auto* c_sweep = app.add_subcommand("sweep", "Rate-distortion sweep over error bounds");
  c_sweep->add_option("--input", sw.input, "Raw volume")->required();
  c_sweep->add_option("--dims", sw.dims, "NXxNYxNZ")->required();
  c_sweep->add_option("--dtype", sw.dtype, "f32 or f64")->capture_default_str();
  c_sweep->add_option("--codec", sw.codec, "interp or block")->capture_default_str();
  c_sweep->add_option("--eb", sw.ebs, "Error bounds")->delimiter(',')->capture_default_str();
  c_sweep->add_flag("--adaptive-eb", sw.adaptive, "Adaptive per-level bounds");
  c_sweep->add_option("--alpha", sw.alpha)->capture_default_str();
  c_sweep->add_option("--beta", sw.beta)->capture_default_str();
  c_sweep->add_option("--post", sw.post, "sz, zfp or off")->capture_default_str();
  c_sweep->add_option("--lossless", sw.lossless, "none or zlib")->capture_default_str();
  c_sweep->add_option("--seed", sw.seed)->capture_default_str();
  c_sweep->add_option("--out", sw.out, "JSON lines output (default: stdout)");
  c_sweep->add_option("--csv", sw.csv, "Optional CSV output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "mrc: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (threads > 0) set_thread_count(static_cast<std::size_t>(threads));
    if (*c_roi) return cmd_roi(roi, out);
    if (*c_comp) return cmd_compress(comp, out);
    if (*c_dec) return cmd_decompress(dec, out);
    if (*c_unc) return cmd_uncertainty(unc, out);
    if (*c_eval) return cmd_eval(ev, out);
    if (*c_sweep) return cmd_sweep(sw, out);
  } catch (const FormatError& e) {
    err << "mrc: format error: " << e.what() << '\n';
    return kFormat;
  } catch (const CoverageError& e) {
    err << "mrc: format error: " << e.what() << '\n';
    return kFormat;
  } catch (const StateError& e) {
    err << "mrc: internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const Error& e) {
    err << "mrc: " << e.what() << '\n';
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    err << "mrc: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "mrc: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace mrc::cli
