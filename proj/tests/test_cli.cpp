#include <gtest/gtest.h>

#include <cstdlib>
#include <sys/wait.h>

#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace testing_support;

namespace {

const std::string kSource = SECTORFLOW_SOURCE_DIR;
const std::string kDemo = kSource + "/data/demo28.csv";

struct Run {
  int status;
  std::string err;
};

// Runs the CLI with stdout discarded and stderr captured.
Run cli(const std::string& args, const fs::path& scratch) {
  const auto err = scratch / "stderr.txt";
  const std::string cmd = std::string("\"") + SECTORFLOW_CLI + "\" " + args + " > /dev/null 2> \"" +
                          err.string() + "\"";
  const int raw = std::system(cmd.c_str());
  Run r{WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(err)};
  fs::remove(err);
  return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::size_t count_files(const fs::path& dir, const std::string& ext) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

// Writes a small three-sector file spanning a few weeks.
fs::path small_input(const fs::path& dir) {
  auto spec = synth::star_dataset(3, 0, 0.8, 60, 9);
  std::ofstream out(dir / "small.csv");
  write_dataset(out, synth::generate_dataset(spec));
  return dir / "small.csv";
}

}  // namespace

TEST(Cli, StatsOneRowPerSector) {
  auto dir = temp_dir("cli_stats");
  auto r = cli("stats --input " + q(small_input(dir)) + " --out-dir " + q(dir), dir);
  ASSERT_EQ(r.status, 0) << r.err;
  const auto csv = slurp(dir / "stats.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv.rfind("Symbol,Sector,", 0), 0u);
  EXPECT_TRUE(fs::exists(dir / "stats.json"));
}

TEST(Cli, MissingInputExitsTwo) {
  auto dir = temp_dir("cli_missing");
  auto r = cli("msa --input " + q(dir / "nope.csv") + " --out-dir " + q(dir), dir);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("input not found"), std::string::npos);
}

TEST(Cli, UnknownFlagExitsTwo) {
  auto dir = temp_dir("cli_badflag");
  EXPECT_EQ(cli("msa --bogus", dir).status, 2);
}

TEST(Cli, TurmoilWithoutDatesIsConfigError) {
  auto dir = temp_dir("cli_turmoil");
  auto r = cli("msa --mode turmoil --input " + q(kDemo) + " --out-dir " + q(dir), dir);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("--crash-start"), std::string::npos);
}

TEST(Cli, MalformedInputExitsOne) {
  auto dir = temp_dir("cli_malformed");
  std::ofstream(dir / "bad.csv") << "date,900010\n2020-01-01,abc\n2020-01-02,1\n";
  auto r = cli("stats --input " + q(dir / "bad.csv") + " --out-dir " + q(dir), dir);
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, WholeModeMatchesGolden) {
  auto dir = temp_dir("cli_whole");
  auto r = cli("msa --mode whole --input " + q(kDemo) + " --out-dir " + q(dir), dir);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(count_files(dir, ".dot"), 3u);  // network plus two trees
  EXPECT_EQ(count_files(dir, ".json"), 3u);
  const fs::path golden = kSource + "/tests/golden/whole";
  const bool update = std::getenv("SECTORFLOW_UPDATE_GOLDEN") != nullptr;
  for (const auto* name : {"msa_outgoing.json", "msa_incoming.json", "msa_outgoing.dot",
                           "msa_incoming.dot"}) {
    if (update) {
      fs::create_directories(golden);
      fs::copy_file(dir / name, golden / name, fs::copy_options::overwrite_existing);
    }
    EXPECT_EQ(slurp(dir / name), slurp(golden / name)) << name;
  }
}

TEST(Cli, YearlyModeWritesSixReports) {
  auto dir = temp_dir("cli_yearly");
  auto r = cli("msa --mode yearly --input " + q(kDemo) + " --out-dir " + q(dir), dir);
  ASSERT_EQ(r.status, 0) << r.err;
  std::size_t reports = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    reports += name.rfind("msa_", 0) == 0 && e.path().extension() == ".json";
  }
  EXPECT_EQ(reports, 6u);
  const auto golden = kSource + "/tests/golden/yearly";
  const bool update = std::getenv("SECTORFLOW_UPDATE_GOLDEN") != nullptr;
  for (const auto* name : {"yearly_outgoing.csv", "yearly_incoming.csv"}) {
    if (update) {
      fs::create_directories(golden);
      fs::copy_file(dir / name, fs::path(golden) / name, fs::copy_options::overwrite_existing);
    }
    EXPECT_EQ(slurp(dir / name), slurp(fs::path(golden) / name)) << name;
  }
}

TEST(Cli, OrientationAndFormatFilters) {
  auto dir = temp_dir("cli_filters");
  auto r = cli("msa --input " + q(kDemo) + " --out-dir " + q(dir) + " --orientation in --format json",
               dir);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "msa_incoming.json"));
  EXPECT_FALSE(fs::exists(dir / "msa_outgoing.json"));
  EXPECT_EQ(count_files(dir, ".dot"), 0u);
  EXPECT_EQ(count_files(dir, ".csv"), 0u);
}

TEST(Cli, ThreadCountDoesNotChangeBytes) {
  auto a = temp_dir("cli_threads_a");
  auto b = temp_dir("cli_threads_b");
  ASSERT_EQ(cli("msa --input " + q(kDemo) + " --out-dir " + q(a) + " --threads 1", a).status, 0);
  ASSERT_EQ(cli("msa --input " + q(kDemo) + " --out-dir " + q(b) + " --threads 6", b).status, 0);
  for (const auto& e : fs::directory_iterator(a))
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path().filename();
}

TEST(Cli, SpecificityWithSectorAsIndex) {
  auto dir = temp_dir("cli_specificity");
  // The index is a single sector column; its correlation with itself is 1.
  auto ds = load_dataset(kDemo);
  std::vector<PriceSeries> one{ds.series[22]};
  {
    std::ofstream out(dir / "index.csv");
    write_dataset(out, one);
  }
  const std::string base = "specificity --input " + q(kDemo) + " --index " + q(dir / "index.csv") +
                           " --seed 5 --out-dir ";
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");
  auto r = cli(base + q(dir / "a"), dir);
  ASSERT_EQ(r.status, 0) << r.err;
  ASSERT_EQ(cli(base + q(dir / "b"), dir).status, 0);
  const auto csv = slurp(dir / "a" / "specificity.csv");
  EXPECT_NE(csv.find("source,2015,230,1\n"), std::string::npos) << csv;
  EXPECT_EQ(csv, slurp(dir / "b" / "specificity.csv"));
  EXPECT_EQ(slurp(dir / "a" / "specificity.json"), slurp(dir / "b" / "specificity.json"));
}

TEST(Cli, SpecificityRequiresSeed) {
  auto dir = temp_dir("cli_specificity_seed");
  auto r = cli("specificity --input " + q(kDemo) + " --index " + q(kDemo), dir);
  EXPECT_EQ(r.status, 2);
}

TEST(Cli, SynthIsReproducible) {
  auto dir = temp_dir("cli_synth");
  ASSERT_EQ(cli("synth --preset demo28 --output " + q(dir / "d.csv"), dir).status, 0);
  EXPECT_EQ(slurp(dir / "d.csv"), slurp(kDemo));
}

TEST(Cli, ConfigFileSuppliesOptions) {
  auto dir = temp_dir("cli_config");
  std::ofstream(dir / "run.toml") << "[msa]\nmode = \"yearly\"\norientation = \"out\"\n";
  auto r = cli("--config " + q(dir / "run.toml") + " msa --input " + q(kDemo) + " --out-dir " + q(dir),
               dir);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "yearly_outgoing.csv"));
  EXPECT_FALSE(fs::exists(dir / "yearly_incoming.csv"));
}
