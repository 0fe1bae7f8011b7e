#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "ahc/codec.hpp"
#include "ahc/error.hpp"
#include "commands.hpp"
#include "test_support.hpp"

namespace ahc {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ahc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string image(const std::string& name) { return (test::image_dir() / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, EncodeDecodeInspect) {
  const auto enc = run({"encode", "-i", image("chelsea.ppm"), "-o", path("c.ahc")});
  ASSERT_EQ(enc.code, 0) << enc.err;
  EXPECT_NE(enc.out.find("rate_pct="), std::string::npos);
  EXPECT_NE(enc.out.find("basis=adaptive-block levels=2"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("c.ahc")));

  const auto dec = run({"decode", path("c.ahc"), "-o", path("c.ppm")});
  ASSERT_EQ(dec.code, 0) << dec.err;
  const ImageBuffer img = load_image(read_file(path("c.ppm")));
  EXPECT_EQ(img.width, 225u);
  EXPECT_EQ(img.height, 150u);
  EXPECT_EQ(img.channels, 3);

  const auto ins = run({"inspect", path("c.ahc")});
  ASSERT_EQ(ins.code, 0);
  EXPECT_NE(ins.out.find("mode=per-block"), std::string::npos);
  EXPECT_NE(ins.out.find("level 2 grid="), std::string::npos);
}

TEST_F(Cli, EncodeVerifyReportsPsnr) {
  const auto r = run({"encode", "--input", image("moon.pgm"), "--output", path("m.ahc"), "--levels", "3", "--quant",
                      "16", "--basis", "set2", "--verify"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("psnr_db="), std::string::npos);
  EXPECT_NE(r.out.find("basis=set2 levels=3"), std::string::npos);
}

TEST_F(Cli, QuantOneIsAParameterError) {
  const auto r = run({"encode", "-i", image("camera.pgm"), "-o", path("x.ahc"), "--quant", "1"});
  EXPECT_EQ(r.code, cli::exit_code_for(ErrorCode::invalid_argument));
  EXPECT_NE(r.err.find("error[invalid-argument]"), std::string::npos) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_FALSE(fs::exists(path("x.ahc")));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"encode", "-i", image("camera.pgm")}).code, 2);
  EXPECT_EQ(run({"encode", "-i", image("camera.pgm"), "-o", path("y"), "--levels", "two"}).code, 2);
  EXPECT_EQ(run({"validate-bases", "--family1", "1", "2"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, UnknownBasisName) {
  const auto r = run({"encode", "-i", image("camera.pgm"), "-o", path("z.ahc"), "--basis", "set9"});
  EXPECT_EQ(r.code, cli::exit_code_for(ErrorCode::invalid_argument));
}

TEST_F(Cli, DistinctDiagnosticsForBadFiles) {
  write_file(path("junk.ahc"), std::vector<std::uint8_t>{'n', 'o', 'p', 'e', 1, 2, 3});
  auto r = run({"decode", path("junk.ahc"), "-o", path("o.pgm")});
  EXPECT_EQ(r.code, cli::exit_code_for(ErrorCode::bad_magic));
  EXPECT_NE(r.err.find("error[bad-magic]"), std::string::npos);

  ASSERT_EQ(run({"encode", "-i", image("camera.pgm"), "-o", path("ok.ahc")}).code, 0);
  auto bytes = read_file(path("ok.ahc"));
  bytes.resize(bytes.size() / 2);
  write_file(path("short.ahc"), bytes);
  r = run({"inspect", path("short.ahc")});
  EXPECT_EQ(r.code, cli::exit_code_for(ErrorCode::truncated));

  bytes = read_file(path("ok.ahc"));
  bytes[4] = 9;
  write_file(path("v9.ahc"), bytes);
  EXPECT_EQ(run({"decode", "-i", path("v9.ahc"), "-o", path("o.pgm")}).code,
            cli::exit_code_for(ErrorCode::unsupported_version));

  write_file(path("ascii.pgm"), std::vector<std::uint8_t>{'P', '2', ' ', '1', ' ', '1', ' ', '9', ' ', '0'});
  EXPECT_EQ(run({"encode", "-i", path("ascii.pgm"), "-o", path("a.ahc")}).code,
            cli::exit_code_for(ErrorCode::image_format));
  EXPECT_EQ(run({"decode", path("missing.ahc"), "-o", path("o.pgm")}).code, cli::exit_code_for(ErrorCode::io_error));
}

TEST_F(Cli, ExitCodesAreDistinct) {
  std::set<int> seen;
  for (int c = 0; c <= static_cast<int>(ErrorCode::io_error); ++c) {
    const int code = cli::exit_code_for(static_cast<ErrorCode>(c));
    EXPECT_GE(code, 10);
    EXPECT_TRUE(seen.insert(code).second);
  }
}

TEST_F(Cli, ValidateBuiltin) {
  const auto r = run({"validate-bases", "builtin"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto set1 = r.out.find("basis set1");
  const auto set2 = r.out.find("basis set2");
  ASSERT_NE(set1, std::string::npos);
  ASSERT_NE(set2, std::string::npos);
  const std::string s1 = r.out.substr(set1, set2 - set1);
  EXPECT_NE(s1.find("orthonormal = yes"), std::string::npos);
  EXPECT_NE(s1.find("modulation_unitary = yes"), std::string::npos);
  for (const char* name : {"basis set2", "basis set3", "basis set4"}) {
    const auto at = r.out.find(name);
    const std::string block = r.out.substr(at, r.out.find("basis set", at + 1) - at);
    EXPECT_NE(block.find("norms = 1 0.5 0.5"), std::string::npos) << block;
    EXPECT_NE(block.find("orthogonal = yes"), std::string::npos) << block;
    EXPECT_NE(block.find("orthonormal = no"), std::string::npos) << block;
  }
}

TEST_F(Cli, ValidateAsPrinted) {
  const auto r = run({"validate-bases", "--as-printed"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("basis set4 (as printed)"), std::string::npos);
  EXPECT_NE(r.out.find("sums = 0 0 -1"), std::string::npos);
  EXPECT_NE(r.out.find("invertible = no"), std::string::npos);
}

TEST_F(Cli, ValidateFamily1) {
  const auto r = run({"validate-bases", "--family1", "1", "1", "0", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("constraint_residual = 0\n"), std::string::npos);
  EXPECT_NE(r.out.find("a32 = 0\n"), std::string::npos);
  EXPECT_NE(r.out.find("invertible = no"), std::string::npos);

  const auto bad = run({"validate-bases", "--family1", "1", "2", "-1", "0"});
  EXPECT_EQ(bad.code, cli::exit_code_for(ErrorCode::degenerate_parameters));
  EXPECT_NE(bad.err.find("error[degenerate-parameters]"), std::string::npos);
}

TEST_F(Cli, ValidateIdenticalAngles) {
  const auto r = run({"validate-bases", "--angles", "0", "0", "0", "0", "0", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("orthogonal = no"), std::string::npos);
  EXPECT_NE(r.out.find("invertible = no"), std::string::npos);

  EXPECT_EQ(run({"validate-bases", "--angles", "5", "0", "0", "0", "0", "0"}).code,
            cli::exit_code_for(ErrorCode::invalid_argument));
}

TEST_F(Cli, BenchSmallGrid) {
  fs::create_directories(path("corpus"));
  fs::copy_file(image("moon.pgm"), path("corpus/moon.pgm"));
  const std::vector<std::string> args = {"bench",        path("corpus"),  "--quant", "64,32,16,8", "--levels", "2",
                                         "--no-timings", "-o",            path("a.csv"),
                                         "--summary",    path("sum.txt")};
  ASSERT_EQ(run(args).code, 0);
  const auto csv = read_file(path("a.csv"));
  const std::string text(csv.begin(), csv.end());
  EXPECT_EQ(text.rfind(cli::kBenchCsvHeader, 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 6 * 4);

  std::vector<std::string> args2 = args;
  args2[8] = path("b.csv");
  ASSERT_EQ(run(args2).code, 0);
  EXPECT_EQ(read_file(path("b.csv")), csv);

  const auto summary = read_file(path("sum.txt"));
  const std::string st(summary.begin(), summary.end());
  EXPECT_NE(st.find("summary mode=adaptive-block"), std::string::npos);
  EXPECT_NE(st.find("summary mode=adaptive-global"), std::string::npos);
}

TEST_F(Cli, BenchRowsFollowTrends) {
  cli::BenchOptions opt;
  opt.corpus = test::image_dir();
  opt.levels = {2};
  opt.bases = {parse_basis_choice("set1"), parse_basis_choice("adaptive-block")};
  opt.timings = false;
  const cli::BenchResult res = cli::run_bench(opt);
  ASSERT_EQ(res.rows.size(), cli::list_corpus(opt.corpus).size() * 2 * 4);
  for (std::size_t i = 0; i < res.rows.size(); i += 4) {
    for (std::size_t j = i + 1; j < i + 4; ++j) {
      EXPECT_LE(res.rows[j].bytes, res.rows[j - 1].bytes) << res.rows[j].image;
      EXPECT_LT(res.rows[j].quant, res.rows[j - 1].quant);
    }
  }
}

TEST_F(Cli, BenchEmptyCorpus) {
  const auto r = run({"bench", dir_.string()});
  EXPECT_EQ(r.code, cli::exit_code_for(ErrorCode::invalid_argument));
}

}  // namespace
}  // namespace ahc
