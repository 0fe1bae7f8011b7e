#include "ahc/container.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <sstream>

#include "ahc/error.hpp"

namespace ahc {

namespace {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1, "u8")); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2, "u16")); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4, "u32")); }
  std::uint64_t u64() { return le(8, "u64"); }
  float f32() { return std::bit_cast<float>(u32()); }

  std::span<const std::uint8_t> bytes(std::uint64_t n, const char* what) {
    need(n, what);
    auto s = in_.subspan(pos_, static_cast<std::size_t>(n));
    pos_ += static_cast<std::size_t>(n);
    return s;
  }

  std::size_t remaining() const { return in_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  void need(std::uint64_t n, const char* what) {
    if (n > remaining()) {
      throw Error(ErrorCode::truncated, std::string("stream ends inside ") + what + " at offset " +
                                            std::to_string(pos_));
    }
  }
  std::uint64_t le(int n, const char* what) {
    need(static_cast<std::uint64_t>(n), what);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t{in_[pos_ + i]} << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::size_t packed_grid_bytes(Dims d) { return (d.size() * 2 + 7) / 8; }

bool representable_as_float(double v) {
  return std::isfinite(v) && static_cast<double>(static_cast<float>(v)) == v;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::invalid_argument, what);
}

std::vector<Dims> level_grid_dims(std::uint32_t width, std::uint32_t height, int levels) {
  std::vector<Dims> out;
  for (const Dims& in : pyramid_input_dims({height, width}, levels)) out.push_back(subband_dims(in));
  return out;
}

}  // namespace

std::size_t channel_symbol_count(std::uint32_t width, std::uint32_t height, int levels) {
  const auto grids = level_grid_dims(width, height, levels);
  std::size_t n = 0;
  for (const Dims& d : grids) n += 3 * d.size();
  return n + grids.back().size();
}

std::vector<std::uint8_t> write_container(const CompressedImage& c) {
  require(c.width >= 1 && c.height >= 1, "image dimensions must be positive");
  require(c.channels == 1 || c.channels == 3, "channel count must be 1 or 3");
  require(c.channel_data.size() == c.channels, "channel data does not match channel count");
  require(c.quant_levels >= kMinQuantLevels && c.quant_levels <= kMaxQuantLevels,
          "quant_levels must lie in [2, 256]");
  require(c.mode == BasisMode::fixed || c.mode == BasisMode::per_block || c.mode == BasisMode::global,
          "unknown basis mode");
  require(static_cast<int>(c.fixed_id) < kBuiltinBasisCount, "fixed basis must be builtin");
  const auto grids = level_grid_dims(c.width, c.height, c.levels);
  const std::size_t n_quant = 3 * grids.size() + 1;

  ByteWriter w;
  for (auto b : kMagic) w.u8(b);
  w.u8(kFormatVersion);
  const std::uint8_t nibble = c.mode == BasisMode::fixed ? static_cast<std::uint8_t>(c.fixed_id) : 0;
  w.u8(static_cast<std::uint8_t>(static_cast<std::uint8_t>(c.mode) | (nibble << 4)));
  w.u32(c.width);
  w.u32(c.height);
  w.u8(c.channels);
  w.u8(c.levels);
  w.u16(c.quant_levels);

  for (const ChannelStream& ch : c.channel_data) {
    require(ch.id_maps.size() == grids.size(), "one basis id map per level is required");
    for (std::size_t k = 0; k < grids.size(); ++k) {
      const BasisIdMap& m = ch.id_maps[k];
      require(m.mode == c.mode, "id map mode differs from the stream mode");
      if (c.mode == BasisMode::per_block) {
        require(m.ids.dims() == grids[k], "per-block id grid has the wrong size");
        BitWriter bits;
        for (auto id : m.ids.data()) {
          require(id < kBuiltinBasisCount, "basis id out of range");
          bits.put(id, 2);
        }
        w.bytes(bits.bytes());
      } else {
        require(m.ids.dims() == (Dims{1, 1}), "single-id map must be 1x1");
        require(m.ids(0, 0) < kBuiltinBasisCount, "basis id out of range");
        if (c.mode == BasisMode::global) {
          w.u8(m.ids(0, 0));
        } else {
          require(m.ids(0, 0) == static_cast<std::uint8_t>(c.fixed_id), "fixed id map disagrees with header");
        }
      }
    }

    require(ch.quantizers.size() == n_quant, "one quantizer per subband is required");
    for (const QuantizerSpec& q : ch.quantizers) {
      require(representable_as_float(q.min) && representable_as_float(q.step) && q.step > 0.0,
              "quantizer bounds must be finite binary32 values with positive step");
      require(q.levels >= kMinQuantLevels && q.levels <= kMaxQuantLevels, "quantizer levels out of range");
      w.f32(static_cast<float>(q.min));
      w.f32(static_cast<float>(q.step));
      w.u16(static_cast<std::uint16_t>(q.levels));
    }

    w.bytes(ch.code_lengths);
    require(ch.payload.size() == (ch.payload_bits + 7) / 8, "payload size disagrees with its bit length");
    w.u64(ch.payload_bits);
    w.bytes(ch.payload);
  }
  return w.take();
}

CompressedImage read_container(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const auto magic = r.bytes(kMagic.size(), "magic");
  if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) {
    throw Error(ErrorCode::bad_magic, "not an AHC1 stream");
  }
  const std::uint8_t version = r.u8();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::unsupported_version, "unsupported format version " + std::to_string(version));
  }

  CompressedImage c;
  const std::uint8_t mode_byte = r.u8();
  const int mode = mode_byte & 0x0f;
  const int nibble = mode_byte >> 4;
  if (mode > 2) throw Error(ErrorCode::corrupt_stream, "unknown basis mode " + std::to_string(mode));
  c.mode = static_cast<BasisMode>(mode);
  if (c.mode == BasisMode::fixed) {
    if (nibble >= kBuiltinBasisCount) {
      throw Error(ErrorCode::invalid_basis_id, "fixed basis id " + std::to_string(nibble) + " out of range");
    }
    c.fixed_id = static_cast<BasisId>(nibble);
  } else if (nibble != 0) {
    throw Error(ErrorCode::corrupt_stream, "basis nibble must be zero outside fixed mode");
  }

  c.width = r.u32();
  c.height = r.u32();
  c.channels = r.u8();
  c.levels = r.u8();
  c.quant_levels = r.u16();
  if (c.width == 0 || c.height == 0) throw Error(ErrorCode::corrupt_stream, "zero image dimension");
  // Keeps symbol-count arithmetic far from overflow; the payload check below
  // then bounds every allocation by the input size.
  if (std::uint64_t{c.width} * c.height > (std::uint64_t{1} << 40)) {
    throw Error(ErrorCode::corrupt_stream, "image dimensions exceed the supported size");
  }
  if (c.channels != 1 && c.channels != 3) throw Error(ErrorCode::corrupt_stream, "channel count must be 1 or 3");
  if (c.quant_levels < kMinQuantLevels || c.quant_levels > kMaxQuantLevels) {
    throw Error(ErrorCode::corrupt_stream, "quant_levels out of range");
  }
  std::vector<Dims> grids;
  try {
    grids = level_grid_dims(c.width, c.height, c.levels);
  } catch (const Error&) {
    throw Error(ErrorCode::corrupt_stream, "level count does not fit the image size");
  }
  const std::size_t n_symbols = channel_symbol_count(c.width, c.height, c.levels);
  const std::size_t n_quant = 3 * grids.size() + 1;

  for (int ch_index = 0; ch_index < c.channels; ++ch_index) {
    ChannelStream ch;
    for (const Dims& g : grids) {
      BasisIdMap m;
      m.mode = c.mode;
      if (c.mode == BasisMode::per_block) {
        // Sizes are checked against the remaining input before allocating.
        const auto packed = r.bytes(packed_grid_bytes(g), "basis id grid");
        BitReader bits(packed, packed.size() * 8);
        m.ids = Grid<std::uint8_t>(g.rows, g.cols);
        for (auto& id : m.ids.data()) id = static_cast<std::uint8_t>(bits.get(2));
        while (bits.remaining() > 0) {
          if (bits.get_bit() != 0) throw Error(ErrorCode::corrupt_stream, "nonzero id grid padding");
        }
      } else if (c.mode == BasisMode::global) {
        const std::uint8_t id = r.u8();
        if (id >= kBuiltinBasisCount) {
          throw Error(ErrorCode::invalid_basis_id, "global basis id " + std::to_string(id) + " out of range");
        }
        m.ids = Grid<std::uint8_t>(1, 1, id);
      } else {
        m.ids = Grid<std::uint8_t>(1, 1, static_cast<std::uint8_t>(c.fixed_id));
      }
      ch.id_maps.push_back(std::move(m));
    }

    for (std::size_t q = 0; q < n_quant; ++q) {
      QuantizerSpec spec;
      spec.min = r.f32();
      spec.step = r.f32();
      spec.levels = r.u16();
      if (!std::isfinite(spec.min) || !std::isfinite(spec.step) || !(spec.step > 0.0)) {
        throw Error(ErrorCode::corrupt_stream, "invalid quantizer bounds");
      }
      if (spec.levels < kMinQuantLevels || spec.levels > kMaxQuantLevels) {
        throw Error(ErrorCode::corrupt_stream, "quantizer levels out of range");
      }
      ch.quantizers.push_back(spec);
    }

    const auto lengths = r.bytes(kAlphabetSize, "code lengths");
    std::copy(lengths.begin(), lengths.end(), ch.code_lengths.begin());
    (void)CodeTable::from_lengths(ch.code_lengths);

    ch.payload_bits = r.u64();
    if (ch.payload_bits < n_symbols) {
      throw Error(ErrorCode::corrupt_stream, "payload is shorter than one bit per symbol");
    }
    const std::uint64_t payload_bytes = ch.payload_bits / 8 + (ch.payload_bits % 8 != 0 ? 1 : 0);
    const auto payload = r.bytes(payload_bytes, "payload");
    if (ch.payload_bits % 8 != 0) {
      const std::uint8_t pad_mask = static_cast<std::uint8_t>(0xffu >> (ch.payload_bits % 8));
      if ((payload.back() & pad_mask) != 0) throw Error(ErrorCode::corrupt_stream, "nonzero payload padding");
    }
    ch.payload.assign(payload.begin(), payload.end());
    c.channel_data.push_back(std::move(ch));
  }

  if (r.remaining() != 0) {
    throw Error(ErrorCode::corrupt_stream, std::to_string(r.remaining()) + " trailing bytes after last channel");
  }
  return c;
}

std::string inspect_container(std::span<const std::uint8_t> bytes) {
  const CompressedImage c = read_container(bytes);
  static const char* kModeNames[] = {"fixed", "per-block", "global"};
  std::ostringstream out;
  out << "format=AHC1 version=" << int{kFormatVersion} << "\n";
  out << "file_bytes=" << bytes.size() << "\n";
  out << "width=" << c.width << " height=" << c.height << " channels=" << int{c.channels} << "\n";
  out << "levels=" << int{c.levels} << " quant_levels=" << c.quant_levels << "\n";
  out << "mode=" << kModeNames[static_cast<int>(c.mode)];
  if (c.mode == BasisMode::fixed) out << " basis=" << to_string(c.fixed_id);
  out << "\n";
  out << "symbols_per_channel=" << channel_symbol_count(c.width, c.height, c.levels) << "\n";

  out << std::fixed << std::setprecision(2);
  for (std::size_t ch = 0; ch < c.channel_data.size(); ++ch) {
    const ChannelStream& s = c.channel_data[ch];
    int used = 0;
    for (auto len : s.code_lengths) used += len != 0;
    out << "channel " << ch << ": payload_bits=" << s.payload_bits << " payload_bytes=" << s.payload.size()
        << " code_symbols=" << used << "\n";
    for (std::size_t k = 0; k < s.id_maps.size(); ++k) {
      const BasisIdMap& m = s.id_maps[k];
      std::array<std::size_t, kBuiltinBasisCount> hist{};
      for (auto id : m.ids.data()) ++hist[id];
      const double total = static_cast<double>(m.ids.size());
      out << "  level " << (k + 1) << " grid=" << m.ids.rows() << "x" << m.ids.cols() << " usage:";
      for (int b = 0; b < kBuiltinBasisCount; ++b) {
        out << " " << to_string(static_cast<BasisId>(b)) << "=" << (100.0 * hist[b] / total) << "%";
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace ahc
