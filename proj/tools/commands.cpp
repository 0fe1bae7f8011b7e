#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "ahc/error.hpp"
#include "ahc/filterbank.hpp"

namespace ahc::cli {

namespace fs = std::filesystem;

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

// Prints tiny magnitudes and negative zero as 0 so tables read cleanly.
std::string num(double v) {
  if (std::abs(v) < 1e-13) v = 0.0;
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

void print_tables(std::ostream& out, const WaveletTables& t) {
  for (int k = 0; k < 3; ++k) {
    const auto& p = t.psi[k];
    out << "  psi" << (k + 1) << " = [[" << num(p[0]) << ", " << num(p[1]) << "], [" << num(p[2]) << ", "
        << num(p[3]) << "]]\n";
  }
}

void print_report(std::ostream& out, const WaveletTables& t, double tol) {
  const ValidationReport r = validate_orthogonality(t, tol);
  out << "  sums = " << num(r.sums[0]) << " " << num(r.sums[1]) << " " << num(r.sums[2]) << "\n";
  out << "  zero_mean = " << yes_no(r.zero_mean[0]) << " " << yes_no(r.zero_mean[1]) << " "
      << yes_no(r.zero_mean[2]) << "\n";
  out << "  norms = " << num(r.norms[0]) << " " << num(r.norms[1]) << " " << num(r.norms[2]) << "\n";
  out << "  inner_products = <1,2> " << num(r.gram[0][1]) << " <1,3> " << num(r.gram[0][2]) << " <2,3> "
      << num(r.gram[1][2]) << "\n";
  out << "  orthogonal = " << yes_no(r.orthogonal) << "\n";
  out << "  orthonormal = " << yes_no(r.orthonormal) << "\n";

  const CorollaryPattern cp = corollary_pattern_check(t);
  out << "  corollary_pattern = ";
  if (cp == CorollaryPattern::not_applicable) {
    out << "not-applicable\n";
  } else if (cp == CorollaryPattern::none) {
    out << "none\n";
  } else {
    out << corollary_pattern_number(cp) << "\n";
  }

  double worst = 0.0;
  for (double xi : {0.0, 0.125, 0.3, 0.71}) worst = std::max(worst, unitarity_deviation(t, xi, 1.0 - xi));
  out << "  modulation_unitary = " << yes_no(unitarity_check(t, 16, tol)) << " (max_deviation " << num(worst)
      << ")\n";
}

void report_construction(std::ostream& out, const WaveletTables& t) {
  try {
    (void)WaveletBasis::from_tables(t);
    out << "  invertible = yes\n";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::singular_basis) throw;
    out << "  invertible = no (" << e.what() << ")\n";
  }
}

int cmd_validate(std::ostream& out, bool as_printed, const std::vector<double>& family1,
                 const std::vector<double>& angles, double tol) {
  if (!family1.empty()) {
    const Family1Params p{family1[0], family1[1], family1[2], family1[3]};
    const WaveletTables t = family1_tables(p);
    out << "basis family1 lambda=" << num(p.lambda) << " a21=" << num(p.a21) << " a22=" << num(p.a22)
        << " a31=" << num(p.a31) << "\n";
    out << "  a32 = " << num(coefficients_from_cells(t.psi[2])[1]) << "\n";
    print_tables(out, t);
    out << "  constraint_residual = " << num(family1_residual(t)) << "\n";
    print_report(out, t, tol);
    report_construction(out, t);
    return 0;
  }
  if (!angles.empty()) {
    AngleParams p;
    for (int i = 0; i < 3; ++i) {
      p.alpha[i] = angles[2 * i];
      p.beta[i] = angles[2 * i + 1];
    }
    const AngleCandidate cand = basis_from_angles(p, tol);
    out << "basis angles";
    for (int i = 0; i < 3; ++i) out << " alpha" << (i + 1) << "=" << num(p.alpha[i]) << " beta" << (i + 1) << "=" << num(p.beta[i]);
    out << "\n";
    print_tables(out, cand.tables);
    print_report(out, cand.tables, tol);
    out << "  invertible = " << yes_no(cand.basis.has_value()) << "\n";
    return 0;
  }
  for (int k = 0; k < kBuiltinBasisCount; ++k) {
    const auto id = static_cast<BasisId>(k);
    const WaveletTables t = as_printed ? printed_tables(id) : builtin_basis(id).tables();
    out << "basis " << to_string(id) << (as_printed ? " (as printed)" : "") << "\n";
    print_tables(out, t);
    print_report(out, t, tol);
    if (as_printed) report_construction(out, t);
  }
  return 0;
}

int cmd_encode(std::ostream& out, const fs::path& input, const fs::path& output, const EncodeParams& params,
               bool verify) {
  const ImageBuffer img = load_image(read_file(input));
  const CompressedImage c = encode_image(img, params);
  const std::vector<std::uint8_t> bytes = write_container(c);
  write_file(output, bytes);

  out << "output=" << output.string() << "\n";
  out << "width=" << img.width << " height=" << img.height << " channels=" << int{img.channels} << "\n";
  out << "basis=" << basis_choice_name(params.basis) << " levels=" << params.levels
      << " quant=" << params.quant_levels << "\n";
  out << "bytes=" << bytes.size() << " raw_bytes=" << img.samples.size() << "\n";
  out << std::fixed << std::setprecision(4);
  const double rate = 100.0 * static_cast<double>(bytes.size()) / static_cast<double>(img.samples.size());
  out << "rate_pct=" << rate << "\n";
  if (verify) {
    const ImageBuffer back = decode_image(read_container(bytes));
    const Metrics m = compute_metrics(img, back, bytes.size());
    out << "mse=" << m.mse << "\n";
    out << "psnr_db=" << format_psnr(m.psnr) << "\n";
  }
  return 0;
}

int cmd_decode(std::ostream& out, const fs::path& input, const fs::path& output) {
  const ImageBuffer img = decode_image(read_container(read_file(input)));
  write_file(output, save_image(img));
  out << "output=" << output.string() << "\n";
  out << "width=" << img.width << " height=" << img.height << " channels=" << int{img.channels} << "\n";
  return 0;
}

int cmd_inspect(std::ostream& out, const fs::path& input) {
  out << inspect_container(read_file(input));
  return 0;
}

std::string format_ms(double ms) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << ms;
  return s.str();
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept { return 10 + static_cast<int>(code); }

std::vector<fs::path> list_corpus(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::io_error, "not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") out.push_back(entry.path());
  }
  if (out.empty()) throw Error(ErrorCode::invalid_argument, "corpus contains no PNM images: " + dir.string());
  std::sort(out.begin(), out.end());
  return out;
}

BenchResult run_bench(const BenchOptions& opt) {
  if (opt.quant_levels.empty() || opt.levels.empty() || opt.bases.empty()) {
    throw Error(ErrorCode::invalid_argument, "bench grid is empty");
  }
  BenchResult result;
  for (const fs::path& path : list_corpus(opt.corpus)) {
    const ImageBuffer img = load_image(read_file(path));
    for (const BasisChoice& basis : opt.bases) {
      for (int levels : opt.levels) {
        for (int quant : opt.quant_levels) {
          EncodeParams p;
          p.levels = levels;
          p.quant_levels = quant;
          p.basis = basis;
          BenchRow row;
          row.image = path.filename().string();
          row.basis = basis;
          row.levels = levels;
          row.quant = quant;

          auto t0 = std::chrono::steady_clock::now();
          const std::vector<std::uint8_t> bytes = write_container(encode_image(img, p));
          row.enc_ms = elapsed_ms(t0);
          t0 = std::chrono::steady_clock::now();
          const ImageBuffer back = decode_image(read_container(bytes));
          row.dec_ms = elapsed_ms(t0);
          if (!opt.timings) row.enc_ms = row.dec_ms = 0.0;

          const Metrics m = compute_metrics(img, back, bytes.size());
          row.bytes = bytes.size();
          row.raw_bytes = m.raw_bytes;
          row.rate_pct = m.compression_rate;
          row.psnr_db = m.psnr;
          result.rows.push_back(row);
        }
      }
    }
  }

  const auto order = all_basis_choices();
  auto basis_rank = [&](const BasisChoice& b) {
    return std::find(order.begin(), order.end(), b) - order.begin();
  };
  std::stable_sort(result.rows.begin(), result.rows.end(), [&](const BenchRow& a, const BenchRow& b) {
    if (a.image != b.image) return a.image < b.image;
    if (a.basis != b.basis) return basis_rank(a.basis) < basis_rank(b.basis);
    if (a.levels != b.levels) return a.levels < b.levels;
    return a.quant > b.quant;
  });

  // Best fixed size per (image, levels, quant).
  using Key = std::tuple<std::string, int, int>;
  std::map<Key, std::size_t> best_fixed;
  for (const BenchRow& r : result.rows) {
    if (r.basis.mode != BasisMode::fixed) continue;
    const Key k{r.image, r.levels, r.quant};
    auto it = best_fixed.find(k);
    if (it == best_fixed.end() || r.bytes < it->second) best_fixed[k] = r.bytes;
  }
  for (BasisMode mode : {BasisMode::per_block, BasisMode::global}) {
    OverheadSummary s;
    s.mode = basis_choice_name({mode, BasisId::set1});
    double sum_pp = 0.0;
    double sum_rel = 0.0;
    for (const BenchRow& r : result.rows) {
      if (r.basis.mode != mode) continue;
      auto it = best_fixed.find(Key{r.image, r.levels, r.quant});
      if (it == best_fixed.end()) continue;
      const double diff = static_cast<double>(r.bytes) - static_cast<double>(it->second);
      const double pp = 100.0 * diff / static_cast<double>(r.raw_bytes);
      sum_pp += pp;
      sum_rel += 100.0 * diff / static_cast<double>(it->second);
      s.min_overhead_pp = s.configs == 0 ? pp : std::min(s.min_overhead_pp, pp);
      s.max_overhead_pp = s.configs == 0 ? pp : std::max(s.max_overhead_pp, pp);
      ++s.configs;
    }
    if (s.configs == 0) continue;
    s.mean_overhead_pp = sum_pp / s.configs;
    s.mean_relative_pct = sum_rel / s.configs;
    result.summary.push_back(s);
  }
  return result;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchCsvHeader << "\n";
  for (const BenchRow& r : rows) {
    std::ostringstream rate;
    rate << std::fixed << std::setprecision(4) << r.rate_pct;
    out << r.image << "," << basis_choice_name(r.basis) << "," << r.levels << "," << r.quant << "," << r.bytes << ","
        << rate.str() << "," << format_psnr(r.psnr_db) << "," << format_ms(r.enc_ms) << "," << format_ms(r.dec_ms)
        << "\n";
  }
}

void write_bench_summary(std::ostream& out, const std::vector<OverheadSummary>& summary) {
  out << std::fixed << std::setprecision(4);
  for (const OverheadSummary& s : summary) {
    out << "summary mode=" << s.mode << " configs=" << s.configs << " mean_overhead_pp=" << s.mean_overhead_pp
        << " min_overhead_pp=" << s.min_overhead_pp << " max_overhead_pp=" << s.max_overhead_pp
        << " mean_relative_pct=" << s.mean_relative_pct << "\n";
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive Haar wavelet image codec"};
  app.name("ahc");
  app.require_subcommand(1);

  EncodeParams params;
  std::string basis_name = "adaptive-block";
  fs::path input;
  fs::path output;
  bool verify = false;
  bool normalized = false;

  auto* encode = app.add_subcommand("encode", "Compress a PGM/PPM image into an .ahc file");
  encode->add_option("-i,--input", input, "Input PNM image")->required();
  encode->add_option("-o,--output", output, "Output .ahc file")->required();
  encode->add_option("--levels", params.levels, "Decomposition levels")->capture_default_str();
  encode->add_option("--quant", params.quant_levels, "Quantization levels for detail subbands")->capture_default_str();
  encode->add_option("--basis", basis_name, "set1|set2|set3|set4|adaptive-block|adaptive-global")
      ->capture_default_str();
  encode->add_flag("--verify", verify, "Decode the result and report MSE/PSNR");
  encode->add_flag("--normalized-energy", normalized, "Select bases by norm-weighted detail energy");

  auto* decode = app.add_subcommand("decode", "Restore a PNM image from an .ahc file");
  decode->add_option("input,-i,--input", input, "Input .ahc file")->required();
  decode->add_option("-o,--output", output, "Output PNM image")->required();

  auto* inspect = app.add_subcommand("inspect", "Summarize an .ahc file without decoding payloads");
  inspect->add_option("input,-i,--input", input, "Input .ahc file")->required();

  BenchOptions bench_opt;
  std::vector<std::string> bench_bases;
  fs::path csv_path;
  fs::path summary_path;
  bool no_timings = false;
  auto* bench = app.add_subcommand("bench", "Run the parameter grid over a directory of PNM images");
  bench->add_option("corpus", bench_opt.corpus, "Directory of PGM/PPM images")->required();
  bench->add_option("--quant", bench_opt.quant_levels, "Quantization levels")->delimiter(',');
  bench->add_option("--levels", bench_opt.levels, "Decomposition levels")->delimiter(',');
  bench->add_option("--basis", bench_bases, "Basis modes")->delimiter(',');
  bench->add_option("-o,--output", csv_path, "CSV output (default stdout)");
  bench->add_option("--summary", summary_path, "Adaptive overhead summary (default stderr)");
  bench->add_flag("--no-timings", no_timings, "Write zero timings for reproducible CSV");

  bool as_printed = false;
  std::string target = "builtin";
  std::vector<double> family1;
  std::vector<double> angles;
  double tol = kDefaultTolerance;
  auto* validate = app.add_subcommand("validate-bases", "Validate builtin or generated wavelet banks");
  validate->add_option("target", target, "builtin")->check(CLI::IsMember({"builtin"}));
  validate->add_flag("--as-printed", as_printed, "Use the tables exactly as originally typeset");
  auto* f1 = validate->add_option("--family1", family1, "lambda a21 a22 a31")->expected(4);
  auto* ang = validate->add_option("--angles", angles, "alpha1 beta1 alpha2 beta2 alpha3 beta3")->expected(6);
  f1->excludes(ang);
  validate->add_option("--tol", tol, "Validation tolerance")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "ahc: usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*encode) {
      params.basis = parse_basis_choice(basis_name);
      params.objective = normalized ? SelectionObjective::normalized : SelectionObjective::literal;
      return cmd_encode(out, input, output, params, verify);
    }
    if (*decode) return cmd_decode(out, input, output);
    if (*inspect) return cmd_inspect(out, input);
    if (*validate) return cmd_validate(out, as_printed, family1, angles, tol);
    if (*bench) {
      if (!bench_bases.empty()) {
        bench_opt.bases.clear();
        for (const auto& b : bench_bases) bench_opt.bases.push_back(parse_basis_choice(b));
      }
      bench_opt.timings = !no_timings;
      const BenchResult result = run_bench(bench_opt);
      if (csv_path.empty()) {
        write_bench_csv(out, result.rows);
      } else {
        std::ofstream f(csv_path);
        if (!f) throw Error(ErrorCode::io_error, "cannot create " + csv_path.string());
        write_bench_csv(f, result.rows);
      }
      if (summary_path.empty()) {
        write_bench_summary(err, result.summary);
      } else {
        std::ofstream f(summary_path);
        if (!f) throw Error(ErrorCode::io_error, "cannot create " + summary_path.string());
        write_bench_summary(f, result.summary);
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "ahc: error[" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "ahc: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace ahc::cli
