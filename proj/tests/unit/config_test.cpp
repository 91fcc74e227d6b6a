#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "skdv/config.hpp"
#include "skdv/csv.hpp"

namespace skdv {
namespace {

const char* kFull = R"(
[grid]
n = 256
half_length = 32

[stepper]
dt = 0.002
scheme = lie
t_end = 0.5
snapshot_stride = 5
dealias = false

[model]
alpha = 2
beta = -0.5
gamma = 1.5

[initial]
u = modulated_gaussian
u_amplitude = 0.3
u_width = 2
u_carrier = 1
v = gaussian
v_amplitude = -0.2
v_width = 3
mollify_level = 4
scale = 0.5

[virial]
p1 = 0.3
p2 = 3
theta2 = 2
theta3 = auto

[windows]
specs = 0.5:0:1, 0.4:0.5:2

[diagnostics]
residual_every = 3
gn_constant = 0.9

[output]
directory = results
strict = true

[sweep]
seed = 17
)";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(ParseConfig, ReadsEverySection) {
  const auto c = parse_config(kFull);
  EXPECT_EQ(c.grid.n, 256u);
  EXPECT_DOUBLE_EQ(c.grid.half_length, 32.0);
  EXPECT_DOUBLE_EQ(c.stepper.dt, 0.002);
  EXPECT_EQ(c.stepper.scheme, Scheme::lie);
  EXPECT_EQ(c.stepper.snapshot_stride, 5u);
  EXPECT_FALSE(c.stepper.dealias);
  EXPECT_DOUBLE_EQ(c.model.beta, -0.5);
  EXPECT_EQ(c.initial.u.family, ProfileFamily::modulated_gaussian);
  EXPECT_DOUBLE_EQ(c.initial.u.carrier, 1.0);
  EXPECT_DOUBLE_EQ(c.initial.v.amplitude, -0.2);
  ASSERT_TRUE(c.initial.mollify_level.has_value());
  EXPECT_EQ(*c.initial.mollify_level, 4);
  EXPECT_DOUBLE_EQ(c.initial.scale, 0.5);
  EXPECT_DOUBLE_EQ(c.virial.p1, 0.3);
  EXPECT_TRUE(c.virial.theta3_auto());
  ASSERT_EQ(c.windows.size(), 2u);
  EXPECT_DOUBLE_EQ(c.windows[1].m, 0.5);
  EXPECT_DOUBLE_EQ(c.windows[1].constant, 2.0);
  EXPECT_EQ(c.diagnostics.residual_every, 3u);
  ASSERT_TRUE(c.diagnostics.gn_constant.has_value());
  EXPECT_DOUBLE_EQ(*c.diagnostics.gn_constant, 0.9);
  EXPECT_EQ(c.output.directory, std::filesystem::path("results"));
  EXPECT_TRUE(c.output.strict);
  EXPECT_EQ(c.seed, 17u);
}

TEST(ParseConfig, EmptyTextGivesDefaults) {
  const auto c = parse_config("");
  const RunConfig d;
  EXPECT_EQ(c.canonical(), d.canonical());
  EXPECT_EQ(c.grid.n, 1024u);
}

TEST(ShippedConfigs, DefaultFileListsTheDefaults) {
  const std::filesystem::path dir = SKDV_CONFIG_DIR;
  RunConfig d;
  EXPECT_EQ(load_config(dir / "default.ini").canonical(), d.canonical());
  for (const char* name : {"smoke.ini", "identities.ini", "decay.ini", "smallness.ini"})
    EXPECT_NO_THROW(load_config(dir / name)) << name;
}

TEST(ParseConfig, RejectsUnknownKeysAndSections) {
  EXPECT_THROW(parse_config("[grid]\nsize = 10\n"), ConfigError);
  EXPECT_THROW(parse_config("[mesh]\nn = 64\n"), ConfigError);
  EXPECT_THROW(parse_config("n = 64\n"), ConfigError);
}

TEST(ParseConfig, RejectsMalformedValues) {
  EXPECT_THROW(parse_config("[grid]\nn = 100\n"), ConfigError);
  EXPECT_THROW(parse_config("[grid]\nn = -4\n"), ConfigError);
  EXPECT_THROW(parse_config("[stepper]\ndt = fast\n"), ConfigError);
  EXPECT_THROW(parse_config("[stepper]\nscheme = rk4\n"), ConfigError);
  EXPECT_THROW(parse_config("[stepper]\ndealias = maybe\n"), ConfigError);
  EXPECT_THROW(parse_config("[model]\ngamma = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("[model]\nalpha = 0\n"), ConfigError);
  EXPECT_NO_THROW(parse_config("[model]\nalpha = 0\n[stepper]\nallow_test_regime = true\n"));
  EXPECT_THROW(parse_config("[virial]\np1 = 0.5\np2 = 2\n"), ConfigError);
  EXPECT_THROW(parse_config("[windows]\nspecs = 0.5:0\n"), ConfigError);
  EXPECT_THROW(parse_config("[windows]\nspecs = 0.9:0:1\n"), ConfigError);
  EXPECT_THROW(parse_config("[initial]\nv = modulated_gaussian\nv_carrier = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[initial]\nu = kdv_soliton\n"), ConfigError);
  EXPECT_THROW(parse_config("[initial]\nu = bessel\n"), ConfigError);
  EXPECT_THROW(parse_config("[diagnostics]\ndecay_start = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[model]\nbeta = inf\n"), ConfigError);
}

TEST(ParseConfig, InitialDataOutsideTheBoxIsAConfigError) {
  EXPECT_THROW(parse_config("[grid]\nn = 64\nhalf_length = 8\n[initial]\nu_center = 7\n"), ConfigError);
}

TEST(ConfigHash, StableUnderFormattingAndOutputDirectory) {
  const auto a = parse_config("[model]\nbeta = -0.5\n[grid]\nn = 512\n");
  const auto b = parse_config("[grid]\n  n=512  \n\n[model]\nbeta=-5e-1\n[output]\ndirectory = elsewhere\n");
  EXPECT_EQ(a.canonical(), b.canonical());
  EXPECT_EQ(a.hash_hex(), b.hash_hex());
  EXPECT_EQ(a.hash_hex().size(), 16u);
  const auto c = parse_config("[model]\nbeta = -0.25\n[grid]\nn = 512\n");
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(a.hash(), fnv1a64(a.canonical()));
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(LoadConfig, ReadsFilesAndReportsMissingOnes) {
  const auto dir = std::filesystem::temp_directory_path() / "skdv_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "run.ini") << kFull;
  }
  EXPECT_EQ(load_config(dir / "run.ini").hash(), parse_config(kFull).hash());
  EXPECT_THROW(load_config(dir / "missing.ini"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(Csv, RoundTripsDoublesAndWritesTheTrailer) {
  const auto dir = std::filesystem::temp_directory_path() / "skdv_csv_test";
  std::filesystem::create_directories(dir);
  const double values[] = {0.1, -1e-300, 1.0 / 3.0, 6.02214076e23, 0.0};
  for (double x : values) EXPECT_EQ(std::stod(format_double(x)), x);
  {
    CsvWriter w(dir / "a.csv", {"t", "x"}, "00ff");
    w.row({0.5, 1.0 / 3.0});
    w.row(std::vector<double>{1.0, 2.0});
    EXPECT_EQ(w.rows(), 2u);
    EXPECT_THROW(w.row({1.0}), std::invalid_argument);
    w.finish();
    EXPECT_THROW(w.row({1.0, 2.0}), std::logic_error);
  }
  EXPECT_EQ(slurp(dir / "a.csv"), "t,x\n0.5," + format_double(1.0 / 3.0) + "\n1,2\n# config_hash=00ff\n");
  std::filesystem::remove_all(dir);
}

TEST(Csv, SchemasHaveTheDocumentedColumns) {
  EXPECT_EQ(csv_schema::invariants.size(), 7u);
  EXPECT_EQ(csv_schema::virial.size(), 6u);
  EXPECT_EQ(csv_schema::decay.size(), 14u);
  EXPECT_EQ(csv_schema::moments.size(), 5u);
  EXPECT_EQ(csv_schema::flags.size(), 4u);
  EXPECT_EQ(csv_schema::decay.front(), "t");
}

}  // namespace
}  // namespace skdv
