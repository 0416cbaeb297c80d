#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "diffent/io.hpp"

using namespace diffent;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("diffent_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

}  // namespace

TEST_F(CliTest, CompileAndPropagate) {
  ASSERT_EQ(run({"compile-mask", "--mask", "cosine", "--out", path("u.json")}), 0) << err_.str();
  const io::json art = io::read_json_file(path("u.json"));
  EXPECT_EQ(art["tool"], "diffent");
  EXPECT_EQ(art["command"], "compile-mask");
  EXPECT_EQ(art["schema_version"], io::kSchemaVersion);
  EXPECT_EQ(art.count("timestamp"), 0u);
  const UnitaryMatrix u = io::unitary_from_json(art["result"]["unitary"]);
  EXPECT_LE(u.unitarity_residual(), 1e-10);

  ASSERT_EQ(run({"propagate", "--state", "fock:1,vac", "--unitary", path("u.json"), "--subset",
                 "1,0", "--out", path("p.json")}),
            0)
      << err_.str();
  const io::json p = io::read_json_file(path("p.json"));
  EXPECT_NEAR(p["result"]["entropy_bits"].get<double>(), 1.0, 1e-9);
}

TEST_F(CliTest, DeterministicArtifacts) {
  const std::vector<std::string> base{"agreement-suite", "--trials", "4", "--seed", "17"};
  auto a = base;
  a.insert(a.end(), {"--out", path("a.json")});
  auto b = base;
  b.insert(b.end(), {"--out", path("b.json")});
  ASSERT_EQ(run(a), 0) << err_.str();
  ASSERT_EQ(run(b), 0) << err_.str();
  EXPECT_EQ(io::read_text_file(path("a.json")), io::read_text_file(path("b.json")));
}

TEST_F(CliTest, ConfigFileMergesUnderFlags) {
  io::write_text_atomic(path("cfg.json"), R"({"photons": 2, "theta-steps": 8, "phi-steps": 8})");
  ASSERT_EQ(run({"scan-noon", "--config", path("cfg.json"), "--phi-steps", "4", "--out",
                 path("n.json")}),
            0)
      << err_.str();
  const io::json n = io::read_json_file(path("n.json"));
  EXPECT_EQ(n["result"]["phi_steps"], 4);
  EXPECT_EQ(n["result"]["theta_steps"], 8);
  io::write_text_atomic(path("bad.json"), R"({"bogus": 1})");
  EXPECT_EQ(run({"scan-noon", "--config", path("bad.json"), "--out", path("x.json")}), 2);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"no-such-command"}), 2);
  EXPECT_EQ(run({"protocol-ifm", "--eta", "1.5", "--out", path("i.json")}), 2);
  EXPECT_EQ(run({"propagate", "--state", "fock:1", "--unitary", path("missing.json")}), 2);
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_FALSE(fs::exists(path("i.json")));
}

TEST_F(CliTest, OutputDirectoryEnvironment) {
  setenv(cli::kOutputDirEnv, dir_.c_str(), 1);
  const int code = run({"protocol-hom"});
  unsetenv(cli::kOutputDirEnv);
  ASSERT_EQ(code, 0) << err_.str();
  const io::json h = io::read_json_file(path("protocol-hom.json"));
  EXPECT_NEAR(h["result"]["coincidence"].get<double>(), 0.0, 1e-12);
}

TEST_F(CliTest, CsvCarriesHashHeader) {
  ASSERT_EQ(run({"protocol-ifm", "--eta", "0.25,1", "--out", path("i.json"), "--csv", path("i.csv")}), 0);
  const io::json j = io::read_json_file(path("i.json"));
  const std::string csv = io::read_text_file(path("i.csv"));
  EXPECT_EQ(csv.rfind("# diffent", 0), 0u);
  EXPECT_NE(csv.find(j["config_hash"].get<std::string>()), std::string::npos);
}
