#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ahc/codec.hpp"

namespace ahc::cli {

struct BenchRow {
  std::string image;
  BasisChoice basis;
  int levels = 0;
  int quant = 0;
  std::size_t bytes = 0;
  std::size_t raw_bytes = 0;
  double rate_pct = 0.0;
  double psnr_db = 0.0;
  double enc_ms = 0.0;
  double dec_ms = 0.0;
};

struct BenchOptions {
  std::filesystem::path corpus;
  std::vector<int> quant_levels = {64, 32, 16, 8};
  std::vector<int> levels = {1, 2, 3, 4};
  std::vector<BasisChoice> bases = all_basis_choices();
  bool timings = true;
};

// Adaptive mode compared with the best fixed basis of the same image,
// levels and quant setting.
struct OverheadSummary {
  std::string mode;
  int configs = 0;
  double mean_overhead_pp = 0.0;   // percentage points of raw size
  double min_overhead_pp = 0.0;
  double max_overhead_pp = 0.0;
  double mean_relative_pct = 0.0;  // percent of the best fixed size
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<OverheadSummary> summary;
};

inline constexpr const char* kBenchCsvHeader = "image,mode,levels,quant,bytes,rate_pct,psnr_db,enc_ms,dec_ms";

// PNM files (.pgm/.ppm/.pnm) of a directory, sorted by name. Throws
// Error(invalid_argument) if none are found.
std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir);

// Rows come out sorted by image, basis order, levels, then quant descending.
BenchResult run_bench(const BenchOptions& opt);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_bench_summary(std::ostream& out, const std::vector<OverheadSummary>& summary);

// Entry point shared by the executable and the tests. Returns the process
// exit code: 0 success, 2 usage error, 10 + ErrorCode for library errors,
// 1 anything else. Errors are reported as one line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int exit_code_for(ErrorCode code) noexcept;

}  // namespace ahc::cli
