#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "windatlas/pipeline.hpp"

namespace fs = std::filesystem;
using namespace windatlas;

namespace {

const fs::path kData{WINDATLAS_TEST_DATA_DIR};

RunConfig fixture_config(const fs::path& out, std::size_t jobs = 1) {
  RunConfig cfg;
  cfg.station_dir = kData / "fixtures" / "stations";
  cfg.power_curve = kData / "power_curves" / "nordex_n100_2500.csv";
  cfg.load = kData / "loads" / "dishwasher.csv";
  cfg.out_dir = out;
  cfg.jobs = jobs;
  return cfg;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("windatlas_test_" + name);
  fs::remove_all(p);
  return p;
}

std::size_t line_count(const std::string& s) { return std::size_t(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Pipeline, FixtureRunProducesAtlas) {
  const auto out = scratch("run");
  std::ostringstream log, err;
  ASSERT_EQ(run_pipeline(fixture_config(out), log, err), 0) << err.str();
  for (const char* f : {"atlas.csv", "atlas.geojson", "atlas.svg", "rho.csv", "entropy.csv", "hourly.csv",
                        "monthly.csv", "ingest_report.csv", "manifest.json", "stations.csv"}) {
    EXPECT_TRUE(fs::is_regular_file(out / f)) << f;
  }
  EXPECT_EQ(line_count(read_file(out / "atlas.csv")), 4u);
  EXPECT_NE(read_file(out / "manifest.json").find(sha256_file(kData / "loads" / "dishwasher.csv")),
            std::string::npos);
  fs::remove_all(out);
}

TEST(Pipeline, OutputsIndependentOfJobs) {
  const auto a = scratch("jobs1");
  const auto b = scratch("jobs3");
  std::ostringstream log, err;
  ASSERT_EQ(run_pipeline(fixture_config(a, 1), log, err), 0) << err.str();
  ASSERT_EQ(run_pipeline(fixture_config(b, 3), log, err), 0) << err.str();
  for (const char* f : {"atlas.csv", "atlas.geojson", "atlas.svg", "rho.csv", "entropy.csv", "hourly.csv",
                        "monthly.csv", "monthly_speed.csv", "ingest_report.csv"}) {
    EXPECT_EQ(read_file(a / f), read_file(b / f)) << f;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Pipeline, StrictThresholdExcludesGappedStation) {
  auto cfg = fixture_config(scratch("strict"));
  cfg.missing_threshold = 0.0;
  const auto r = execute(cfg, Stage::simulate);
  ASSERT_EQ(r.ingest.size(), 3u);
  EXPECT_EQ(r.ingest[1].station_id, "100002");
  EXPECT_FALSE(r.ingest[1].kept);
  EXPECT_EQ(r.ingest[1].missing, 6u);
  ASSERT_EQ(r.outcomes.size(), 2u);
  EXPECT_EQ(r.outcomes[0].station_id, "100001");
  EXPECT_EQ(r.outcomes[1].station_id, "100003");
}

TEST(Pipeline, SweepOnFixturesSaturates) {
  auto cfg = fixture_config(scratch("sweep"));
  cfg.capacities = {200, 500, 800, 1000, 1500, 2000};
  const auto r = execute(cfg, Stage::sweep);
  ASSERT_EQ(r.sweep.size(), 6u);
  for (std::size_t i = 1; i < r.sweep.size(); ++i) {
    EXPECT_GE(r.sweep[i].min_rho, r.sweep[i - 1].min_rho);
    EXPECT_GE(r.sweep[i].mean_rho, r.sweep[i - 1].mean_rho);
  }
  EXPECT_EQ(r.sweep[3].mean_rho, r.sweep[5].mean_rho);
}

TEST(Pipeline, FailuresNameStationAndStage) {
  auto cfg = fixture_config(scratch("bad"));
  cfg.station_dir = scratch("bad_input");
  fs::create_directories(cfg.station_dir);
  write_file(cfg.station_dir / "stations.csv", "station_id,name,latitude,longitude\n9,X,60,25\n");
  write_file(cfg.station_dir / "9.csv", "station_id,timestamp_iso8601,wind_speed_ms\n9,garbage,1\n");
  try {
    execute(cfg, Stage::ingest);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "ingest");
    EXPECT_NE(std::string(e.what()).find("9.csv"), std::string::npos) << e.what();
  }
  fs::remove_all(cfg.station_dir);
}

TEST(Pipeline, ConfigValidation) {
  auto cfg = fixture_config(scratch("cfg"));
  cfg.jobs = 0;
  EXPECT_THROW(cfg.validate(true), DataError);
  cfg = fixture_config(scratch("cfg"));
  cfg.capacities = {};
  EXPECT_THROW(cfg.validate(true), DataError);
}

#ifdef WINDATLAS_TEST_CLI
TEST(Cli, RunTwiceIsByteIdentical) {
  const auto a = scratch("cli_a");
  const auto b = scratch("cli_b");
  const std::string base = std::string("\"") + WINDATLAS_TEST_CLI + "\" run --station-dir \"" +
                           (kData / "fixtures" / "stations").string() + "\" --out ";
  ASSERT_EQ(std::system((base + "\"" + a.string() + "\" -j 1 > /dev/null").c_str()), 0);
  ASSERT_EQ(std::system((base + "\"" + b.string() + "\" -j 4 > /dev/null").c_str()), 0);
  EXPECT_EQ(line_count(read_file(a / "atlas.csv")), 4u);
  EXPECT_EQ(read_file(a / "atlas.csv"), read_file(b / "atlas.csv"));
  EXPECT_EQ(read_file(a / "rho.csv"), read_file(b / "rho.csv"));

  // atlas subcommand on the same results reproduces the run's atlas
  const auto prefix = a / "again";
  ASSERT_EQ(std::system(("\"" + std::string(WINDATLAS_TEST_CLI) + "\" atlas --results \"" + a.string() +
                         "\" --out \"" + prefix.string() + "\" > /dev/null")
                            .c_str()),
            0);
  EXPECT_EQ(read_file(a / "again.csv"), read_file(a / "atlas.csv"));
  EXPECT_EQ(read_file(a / "again.geojson"), read_file(a / "atlas.geojson"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, RejectsUnknownOption) {
  const std::string cmd = std::string("\"") + WINDATLAS_TEST_CLI + "\" run --bogus > /dev/null 2>&1";
  EXPECT_NE(std::system(cmd.c_str()), 0);
}
#endif
