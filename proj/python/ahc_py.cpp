#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "ahc/codec.hpp"
#include "ahc/container.hpp"
#include "ahc/error.hpp"
#include "ahc/filterbank.hpp"
#include "ahc/transform.hpp"

namespace py = pybind11;
using namespace ahc;

namespace {

using DoubleIn = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ByteIn = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

py::array_t<double> tables_to_array(const WaveletTables& t) {
  py::array_t<double> out({3, 2, 2});
  auto v = out.mutable_unchecked<3>();
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 4; ++i) v(k, i / 2, i % 2) = t.psi[k][i];
  }
  return out;
}

WaveletTables tables_from_array(const DoubleIn& a) {
  if (a.ndim() != 3 || a.shape(0) != 3 || a.shape(1) != 2 || a.shape(2) != 2) {
    throw Error(ErrorCode::invalid_argument, "wavelet tables must have shape (3, 2, 2)");
  }
  auto v = a.unchecked<3>();
  WaveletTables t;
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 4; ++i) t.psi[k][i] = v(k, i / 2, i % 2);
  }
  return t;
}

Block block_from_array(const DoubleIn& a) {
  if (a.ndim() != 2 || a.shape(0) != 2 || a.shape(1) != 2) {
    throw Error(ErrorCode::invalid_argument, "block must have shape (2, 2)");
  }
  auto v = a.unchecked<2>();
  return {v(0, 0), v(0, 1), v(1, 0), v(1, 1)};
}

py::array_t<double> matrix_to_array(const Matrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

Matrix matrix_from_array(const DoubleIn& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::invalid_argument, "matrix must be two-dimensional");
  Matrix m(a.shape(0), a.shape(1));
  std::copy(a.data(), a.data() + a.size(), m.data().begin());
  return m;
}

ImageBuffer image_from_array(const ByteIn& a) {
  if (a.ndim() != 2 && !(a.ndim() == 3 && (a.shape(2) == 1 || a.shape(2) == 3))) {
    throw Error(ErrorCode::invalid_argument, "image must have shape (H, W) or (H, W, 1|3)");
  }
  ImageBuffer img;
  img.height = static_cast<std::uint32_t>(a.shape(0));
  img.width = static_cast<std::uint32_t>(a.shape(1));
  img.channels = static_cast<std::uint8_t>(a.ndim() == 3 ? a.shape(2) : 1);
  img.samples.assign(a.data(), a.data() + a.size());
  return img;
}

py::array_t<std::uint8_t> image_to_array(const ImageBuffer& img) {
  std::vector<py::ssize_t> shape = {img.height, img.width};
  if (img.channels != 1) shape.push_back(img.channels);
  py::array_t<std::uint8_t> out(shape);
  std::copy(img.samples.begin(), img.samples.end(), out.mutable_data());
  return out;
}

std::span<const std::uint8_t> as_span(const py::bytes& b) {
  const std::string_view s = b;
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
  return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

EncodeParams make_params(int levels, int quant, const std::string& basis, bool normalized) {
  EncodeParams p;
  p.levels = levels;
  p.quant_levels = quant;
  p.basis = parse_basis_choice(basis);
  p.objective = normalized ? SelectionObjective::normalized : SelectionObjective::literal;
  return p;
}

py::dict report_to_dict(const ValidationReport& r) {
  py::dict d;
  d["sums"] = r.sums;
  d["zero_mean"] = r.zero_mean;
  d["norms"] = r.norms;
  d["gram"] = r.gram;
  d["pairwise_orthogonal"] = r.pairwise_orthogonal;
  d["orthogonal"] = r.orthogonal;
  d["orthonormal"] = r.orthonormal;
  d["tolerance"] = r.tolerance;
  return d;
}

py::tuple coeffs_tuple(const BlockCoeffs& c) { return py::make_tuple(c.a, c.v, c.h, c.d); }

Scaling scaling_of(bool scaled) { return scaled ? Scaling::scaled : Scaling::literal; }

}  // namespace

PYBIND11_MODULE(_ahc, m) {
  m.doc() = "Adaptive 2-D Haar wavelet image codec";

  static py::exception<Error> error_type(m, "AhcError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
      inst.attr("code") = to_string(e.code());
      PyErr_SetObject(error_type.ptr(), inst.ptr());
    }
  });

  m.def("builtin_tables", [](const std::string& name) { return tables_to_array(builtin_basis(name).tables()); },
        py::arg("name"), "psi tables of set1..set4 as an array of shape (3, 2, 2).");
  m.def("printed_tables", [](const std::string& name) { return tables_to_array(printed_tables(parse_basis_id(name))); },
        py::arg("name"));
  m.def(
      "validate",
      [](const DoubleIn& tables, double tol) {
        return report_to_dict(validate_orthogonality(tables_from_array(tables), tol));
      },
      py::arg("tables"), py::arg("tol") = kDefaultTolerance);
  m.def(
      "family1_tables",
      [](double lambda, double a21, double a22, double a31) {
        return tables_to_array(family1_tables({lambda, a21, a22, a31}));
      },
      py::arg("lam"), py::arg("a21"), py::arg("a22"), py::arg("a31"));
  m.def(
      "angle_tables",
      [](std::array<double, 3> alpha, std::array<double, 3> beta) {
        return tables_to_array(basis_from_angles({alpha, beta}).tables);
      },
      py::arg("alpha"), py::arg("beta"));
  m.def(
      "corollary_pattern",
      [](const DoubleIn& tables) {
        return corollary_pattern_number(corollary_pattern_check(tables_from_array(tables)));
      },
      py::arg("tables"), "1..4 for a matching zero pattern, 0 otherwise.");
  m.def(
      "is_unitary",
      [](const DoubleIn& tables, int samples, double tol) {
        return unitarity_check(tables_from_array(tables), samples, tol);
      },
      py::arg("tables"), py::arg("samples") = 16, py::arg("tol") = kDefaultTolerance);
  m.def(
      "is_invertible",
      [](const DoubleIn& tables) {
        try {
          (void)WaveletBasis::from_tables(tables_from_array(tables));
          return true;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::singular_basis) throw;
          return false;
        }
      },
      py::arg("tables"));

  m.def(
      "block_forward",
      [](const DoubleIn& block, const std::string& basis, bool scaled) {
        return coeffs_tuple(block_forward(block_from_array(block), builtin_basis(basis), scaling_of(scaled)));
      },
      py::arg("block"), py::arg("basis") = "set1", py::arg("scaled") = false, "Returns (a, v, h, d).");
  m.def(
      "block_inverse",
      [](std::array<double, 4> c, const std::string& basis, bool scaled) {
        const Block b = block_inverse({c[0], c[1], c[2], c[3]}, builtin_basis(basis), scaling_of(scaled));
        py::array_t<double> out({2, 2});
        auto v = out.mutable_unchecked<2>();
        v(0, 0) = b.m11;
        v(0, 1) = b.m12;
        v(1, 0) = b.m21;
        v(1, 1) = b.m22;
        return out;
      },
      py::arg("coeffs"), py::arg("basis") = "set1", py::arg("scaled") = false);
  m.def(
      "adaptive_block_forward",
      [](const DoubleIn& block, bool scaled) {
        const BlockCoeffs c = adaptive_block_forward(block_from_array(block), scaling_of(scaled));
        return py::make_tuple(c.a, c.v, c.h, c.d, std::string(to_string(c.basis)));
      },
      py::arg("block"), py::arg("scaled") = false, "Returns (a, v, h, d, basis name).");
  m.def(
      "subband_forward",
      [](const DoubleIn& matrix, const std::string& basis) {
        const BasisChoice choice = parse_basis_choice(basis);
        TransformOptions opt;
        opt.mode = choice.mode;
        opt.fixed_id = choice.fixed_id;
        const SubbandSet s = subband_forward(matrix_from_array(matrix), opt);
        py::array_t<std::uint8_t> ids({s.ids.ids.rows(), s.ids.ids.cols()});
        std::copy(s.ids.ids.data().begin(), s.ids.ids.data().end(), ids.mutable_data());
        py::dict d;
        d["A"] = matrix_to_array(s.A);
        d["V"] = matrix_to_array(s.V);
        d["H"] = matrix_to_array(s.H);
        d["D"] = matrix_to_array(s.D);
        d["ids"] = ids;
        d["detail_energy"] = s.detail_energy;
        return d;
      },
      py::arg("matrix"), py::arg("basis") = "adaptive-block",
      "One decomposition step of an even-sized matrix with literal coefficients.");

  m.def(
      "encode",
      [](const ByteIn& image, int levels, int quant, const std::string& basis, bool normalized) {
        const ImageBuffer img = image_from_array(image);
        std::vector<std::uint8_t> bytes;
        {
          py::gil_scoped_release release;
          bytes = write_container(encode_image(img, make_params(levels, quant, basis, normalized)));
        }
        return to_bytes(bytes);
      },
      py::arg("image"), py::arg("levels") = 2, py::arg("quant") = 64, py::arg("basis") = "adaptive-block",
      py::arg("normalized_energy") = false, "Compress a uint8 image of shape (H, W) or (H, W, 3) to .ahc bytes.");
  m.def(
      "decode",
      [](const py::bytes& data) {
        const std::string copy = data;
        ImageBuffer img;
        {
          py::gil_scoped_release release;
          img = decode_image(read_container(
              std::span(reinterpret_cast<const std::uint8_t*>(copy.data()), copy.size())));
        }
        return image_to_array(img);
      },
      py::arg("data"));
  m.def("inspect", [](const py::bytes& data) { return inspect_container(as_span(data)); }, py::arg("data"));
  m.def(
      "transform_roundtrip",
      [](const ByteIn& image, int levels, const std::string& basis) {
        return image_to_array(transform_roundtrip(image_from_array(image), make_params(levels, 64, basis, false)));
      },
      py::arg("image"), py::arg("levels") = 2, py::arg("basis") = "adaptive-block",
      "Transform and inverse transform with quantization bypassed.");
  m.def(
      "metrics",
      [](const ByteIn& orig, const ByteIn& recon, std::size_t compressed_bytes) {
        const Metrics mt = compute_metrics(image_from_array(orig), image_from_array(recon), compressed_bytes);
        py::dict d;
        d["compressed_bytes"] = mt.compressed_bytes;
        d["raw_bytes"] = mt.raw_bytes;
        d["compression_rate"] = mt.compression_rate;
        d["mse_per_channel"] = mt.mse_per_channel;
        d["mse"] = mt.mse;
        d["psnr"] = mt.psnr;
        return d;
      },
      py::arg("orig"), py::arg("recon"), py::arg("compressed_bytes"));
  m.def("load_pnm", [](const std::string& path) { return image_to_array(load_image(read_file(path))); },
        py::arg("path"));
  m.def(
      "save_pnm",
      [](const std::string& path, const ByteIn& image) {
        write_file(path, save_image(image_from_array(image)));
      },
      py::arg("path"), py::arg("image"));
}
