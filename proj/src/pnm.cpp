#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "ahc/codec.hpp"
#include "ahc/error.hpp"

namespace ahc {

namespace {

class HeaderScanner {
 public:
  explicit HeaderScanner(std::span<const std::uint8_t> in) : in_(in) {}

  // Skips whitespace and '#' comments (to end of line) before a token.
  void skip_space() {
    while (pos_ < in_.size()) {
      const auto ch = in_[pos_];
      if (ch == '#') {
        while (pos_ < in_.size() && in_[pos_] != '\n' && in_[pos_] != '\r') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint64_t number(const char* what) {
    skip_space();
    std::uint64_t v = 0;
    std::size_t digits = 0;
    while (pos_ < in_.size() && std::isdigit(in_[pos_])) {
      v = v * 10 + (in_[pos_] - '0');
      ++pos_;
      if (++digits > 9) throw Error(ErrorCode::image_format, std::string("PNM ") + what + " is too large");
    }
    if (digits == 0) throw Error(ErrorCode::image_format, std::string("PNM header is missing the ") + what);
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void single_space() {
    if (pos_ >= in_.size() || !std::isspace(in_[pos_])) {
      throw Error(ErrorCode::image_format, "PNM header must end with a whitespace byte");
    }
    ++pos_;
  }

  std::size_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

ImageBuffer load_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw Error(ErrorCode::image_format, "not a PNM file");
  ImageBuffer img;
  switch (bytes[1]) {
    case '5': img.channels = 1; break;
    case '6': img.channels = 3; break;
    case '2':
    case '3':
      throw Error(ErrorCode::image_format, "ASCII PNM (P2/P3) is not supported");
    default:
      throw Error(ErrorCode::image_format, "unsupported PNM variant");
  }
  HeaderScanner scan(bytes.subspan(2));
  if (bytes.size() > 2 && !std::isspace(bytes[2]) && bytes[2] != '#') {
    throw Error(ErrorCode::image_format, "malformed PNM magic");
  }
  const auto width = scan.number("width");
  const auto height = scan.number("height");
  const auto maxval = scan.number("maxval");
  scan.single_space();
  if (width == 0 || height == 0) throw Error(ErrorCode::image_format, "PNM dimensions must be positive");
  if (maxval != 255) {
    throw Error(ErrorCode::image_format, "only 8-bit PNM with maxval 255 is supported (got " +
                                             std::to_string(maxval) + ")");
  }
  const std::uint64_t count = width * height * img.channels;
  const std::size_t offset = 2 + scan.position();
  if (bytes.size() - offset < count) throw Error(ErrorCode::image_format, "PNM raster is truncated");
  img.width = static_cast<std::uint32_t>(width);
  img.height = static_cast<std::uint32_t>(height);
  img.samples.assign(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                     bytes.begin() + static_cast<std::ptrdiff_t>(offset + count));
  return img;
}

std::vector<std::uint8_t> save_image(const ImageBuffer& img) {
  if (img.channels != 1 && img.channels != 3) {
    throw Error(ErrorCode::invalid_argument, "PNM output needs 1 or 3 channels");
  }
  if (img.samples.size() != static_cast<std::size_t>(img.width) * img.height * img.channels) {
    throw Error(ErrorCode::dimension_mismatch, "sample count does not match image dimensions");
  }
  const std::string header = std::string(img.channels == 1 ? "P5" : "P6") + "\n" + std::to_string(img.width) +
                             " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.samples.begin(), img.samples.end());
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::io_error, "failed reading " + path.string());
  return data;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::io_error, "failed writing " + path.string());
}

}  // namespace ahc
