#include "ahc/codec.hpp"

#include <cmath>
#include <future>
#include <iomanip>
#include <limits>
#include <sstream>

#include "ahc/bitio.hpp"
#include "ahc/entropy.hpp"
#include "ahc/error.hpp"
#include "ahc/quantizer.hpp"

namespace ahc {

namespace {

void check_image(const ImageBuffer& img) {
  if (img.width == 0 || img.height == 0) throw Error(ErrorCode::invalid_argument, "image is empty");
  if (img.channels != 1 && img.channels != 3) throw Error(ErrorCode::invalid_argument, "image needs 1 or 3 channels");
  if (img.samples.size() != static_cast<std::size_t>(img.width) * img.height * img.channels) {
    throw Error(ErrorCode::dimension_mismatch, "sample count does not match image dimensions");
  }
}

void check_params(const EncodeParams& p) {
  if (p.levels < 1 || p.levels > 255) throw Error(ErrorCode::invalid_argument, "levels must lie in [1, 255]");
  if (p.quant_levels < kMinQuantLevels || p.quant_levels > kMaxQuantLevels) {
    throw Error(ErrorCode::invalid_argument, "quantization levels must lie in [2, 256]");
  }
  if (static_cast<int>(p.basis.fixed_id) >= kBuiltinBasisCount) {
    throw Error(ErrorCode::invalid_argument, "fixed basis must be set1..set4");
  }
}

Matrix channel_matrix(const ImageBuffer& img, int ch) {
  Matrix m(img.height, img.width);
  for (std::uint32_t r = 0; r < img.height; ++r) {
    for (std::uint32_t c = 0; c < img.width; ++c) m(r, c) = img.at(r, c, ch);
  }
  return m;
}

std::uint8_t to_sample(double v) {
  const double r = std::round(v);  // half away from zero
  if (!(r > 0.0)) return 0;
  if (r >= 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

void store_channel(ImageBuffer& img, int ch, const Matrix& m) {
  for (std::uint32_t r = 0; r < img.height; ++r) {
    for (std::uint32_t c = 0; c < img.width; ++c) {
      img.samples[(static_cast<std::size_t>(r) * img.width + c) * img.channels + ch] = to_sample(m(r, c));
    }
  }
}

TransformOptions transform_options(const EncodeParams& p) {
  TransformOptions opt;
  opt.mode = p.basis.mode;
  opt.fixed_id = p.basis.fixed_id;
  opt.scaling = Scaling::scaled;
  opt.objective = p.objective;
  return opt;
}

void append(std::vector<std::uint8_t>& stream, const Grid<std::uint8_t>& g) {
  stream.insert(stream.end(), g.data().begin(), g.data().end());
}

ChannelStream encode_channel(const Matrix& m, const EncodeParams& p) {
  const SubbandPyramid pyr = pyramid_forward(m, p.levels, transform_options(p));
  const std::size_t n_levels = pyr.levels.size();

  ChannelStream ch;
  std::vector<Grid<std::uint8_t>> detail_indices;  // level-1 V,H,D, ...
  for (const SubbandSet& s : pyr.levels) {
    ch.id_maps.push_back(s.ids);
    for (const Matrix* band : {&s.V, &s.H, &s.D}) {
      QuantizedSubband q = quantize_subband(*band, p.quant_levels);
      ch.quantizers.push_back(q.spec);
      detail_indices.push_back(std::move(q.indices));
    }
  }
  QuantizedSubband coarse = quantize_subband(pyr.coarse_A, kApproximationQuantLevels);
  ch.quantizers.push_back(coarse.spec);

  std::vector<std::uint8_t> symbols;
  append(symbols, coarse.indices);
  for (std::size_t k = n_levels; k-- > 0;) {
    for (int b = 0; b < 3; ++b) append(symbols, detail_indices[3 * k + b]);
  }

  const CodeTable table = build_code(histogram(symbols));
  EncodedBits bits = encode(symbols, table);
  ch.code_lengths = table.lengths();
  ch.payload_bits = bits.bit_count;
  ch.payload = std::move(bits.bytes);
  return ch;
}

Matrix decode_channel(const CompressedImage& c, const ChannelStream& ch) {
  const std::vector<Dims> inputs = pyramid_input_dims({c.height, c.width}, c.levels);
  const std::size_t n_levels = inputs.size();
  if (ch.id_maps.size() != n_levels || ch.quantizers.size() != 3 * n_levels + 1) {
    throw Error(ErrorCode::corrupt_stream, "channel layout does not match the level count");
  }

  const CodeTable table = CodeTable::from_lengths(ch.code_lengths);
  BitReader in(ch.payload, ch.payload_bits);
  auto read_band = [&](Dims d, const QuantizerSpec& spec) {
    Grid<std::uint8_t> idx(d.rows, d.cols);
    for (auto& v : idx.data()) v = table.decode_one(in);
    return dequantize(idx, spec);
  };

  SubbandPyramid pyr;
  pyr.scaling = Scaling::scaled;
  pyr.orig_dims = inputs;
  pyr.levels.resize(n_levels);
  pyr.coarse_A = read_band(subband_dims(inputs.back()), ch.quantizers.back());
  for (std::size_t k = n_levels; k-- > 0;) {
    const Dims d = subband_dims(inputs[k]);
    SubbandSet& s = pyr.levels[k];
    s.V = read_band(d, ch.quantizers[3 * k]);
    s.H = read_band(d, ch.quantizers[3 * k + 1]);
    s.D = read_band(d, ch.quantizers[3 * k + 2]);
    s.ids = ch.id_maps[k];
  }
  if (in.remaining() != 0) throw Error(ErrorCode::corrupt_stream, "payload has unused bits");
  return pyramid_inverse(pyr);
}

template <class Fn>
auto per_channel(int channels, Fn fn) {
  using R = decltype(fn(0));
  std::vector<std::future<R>> jobs;
  for (int ch = 0; ch < channels; ++ch) jobs.push_back(std::async(std::launch::async, fn, ch));
  std::vector<R> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace

BasisChoice parse_basis_choice(std::string_view name) {
  if (name == "adaptive-block") return {BasisMode::per_block, BasisId::set1};
  if (name == "adaptive-global") return {BasisMode::global, BasisId::set1};
  return {BasisMode::fixed, parse_basis_id(name)};
}

std::string basis_choice_name(const BasisChoice& choice) {
  switch (choice.mode) {
    case BasisMode::per_block: return "adaptive-block";
    case BasisMode::global: return "adaptive-global";
    case BasisMode::fixed: break;
  }
  return std::string(to_string(choice.fixed_id));
}

std::vector<BasisChoice> all_basis_choices() {
  std::vector<BasisChoice> out;
  for (int k = 0; k < kBuiltinBasisCount; ++k) out.push_back({BasisMode::fixed, static_cast<BasisId>(k)});
  out.push_back({BasisMode::per_block, BasisId::set1});
  out.push_back({BasisMode::global, BasisId::set1});
  return out;
}

CompressedImage encode_image(const ImageBuffer& img, const EncodeParams& params) {
  check_image(img);
  check_params(params);
  // Fails early when the image is too small for the requested depth.
  (void)pyramid_input_dims({img.height, img.width}, params.levels);

  CompressedImage c;
  c.width = img.width;
  c.height = img.height;
  c.channels = img.channels;
  c.levels = static_cast<std::uint8_t>(params.levels);
  c.quant_levels = static_cast<std::uint16_t>(params.quant_levels);
  c.mode = params.basis.mode;
  c.fixed_id = params.basis.mode == BasisMode::fixed ? params.basis.fixed_id : BasisId::set1;
  c.channel_data = per_channel(img.channels, [&](int ch) { return encode_channel(channel_matrix(img, ch), params); });
  return c;
}

ImageBuffer decode_image(const CompressedImage& c) {
  if (c.channel_data.size() != c.channels || (c.channels != 1 && c.channels != 3)) {
    throw Error(ErrorCode::corrupt_stream, "channel count mismatch");
  }
  ImageBuffer img;
  img.width = c.width;
  img.height = c.height;
  img.channels = c.channels;
  img.samples.resize(static_cast<std::size_t>(c.width) * c.height * c.channels);
  const auto planes = per_channel(c.channels, [&](int ch) { return decode_channel(c, c.channel_data[ch]); });
  for (int ch = 0; ch < c.channels; ++ch) store_channel(img, ch, planes[ch]);
  return img;
}

ImageBuffer transform_roundtrip(const ImageBuffer& img, const EncodeParams& params) {
  check_image(img);
  check_params(params);
  ImageBuffer out = img;
  for (int ch = 0; ch < img.channels; ++ch) {
    const SubbandPyramid pyr = pyramid_forward(channel_matrix(img, ch), params.levels, transform_options(params));
    store_channel(out, ch, pyramid_inverse(pyr));
  }
  return out;
}

Metrics compute_metrics(const ImageBuffer& orig, const ImageBuffer& recon, std::size_t compressed_bytes) {
  if (orig.width != recon.width || orig.height != recon.height || orig.channels != recon.channels ||
      orig.samples.size() != recon.samples.size()) {
    throw Error(ErrorCode::dimension_mismatch, "images differ in size or channel count");
  }
  check_image(orig);
  Metrics m;
  m.compressed_bytes = compressed_bytes;
  m.raw_bytes = orig.samples.size();
  m.compression_rate = 100.0 * static_cast<double>(compressed_bytes) / static_cast<double>(m.raw_bytes);

  std::vector<double> sq(orig.channels, 0.0);
  for (std::size_t i = 0; i < orig.samples.size(); ++i) {
    const double d = static_cast<double>(orig.samples[i]) - static_cast<double>(recon.samples[i]);
    sq[i % orig.channels] += d * d;
  }
  const double pixels = static_cast<double>(orig.width) * orig.height;
  double total = 0.0;
  for (double s : sq) {
    m.mse_per_channel.push_back(s / pixels);
    total += s;
  }
  m.mse = total / static_cast<double>(orig.samples.size());
  m.psnr = m.mse == 0.0 ? std::numeric_limits<double>::infinity() : 10.0 * std::log10(255.0 * 255.0 / m.mse);
  return m;
}

std::string format_psnr(double psnr) {
  if (std::isinf(psnr)) return "inf";
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << psnr;
  return s.str();
}

}  // namespace ahc
