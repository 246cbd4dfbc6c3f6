#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

namespace {

using Json = nlohmann::json;

struct Run {
  int status = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(KWIDTH_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

}  // namespace

TEST(Cli, Width) {
  const auto r = cli("width --q 0.5 --beta 0.5 --n 2 --verify");
  ASSERT_EQ(r.status, 0);
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j.at("width").get<double>(), 0.15916461950275529885, 1e-15);
  EXPECT_LE(j.at("verify").at("delta").get<double>(), 1e-10);
}

TEST(Cli, Threshold) {
  auto r = cli("threshold --q 0.2");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(Json::parse(r.out).at("n_q"), 13);
  r = cli("threshold --q 0.15 --beta 2");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(Json::parse(r.out).at("n_q_beta"), 1);
}

TEST(Cli, VerifyCy2n) {
  const auto r = cli("verify-cy2n --q 0.2 --beta 0.5 --n 13 --path lemma2");
  ASSERT_EQ(r.status, 0);
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j.at("holds").get<bool>());
}

TEST(Cli, CvdReferenceVectors) {
  const auto r = cli("cvd --q 0.21 --beta 0 --paper-vectors");
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(Json::parse(r.out).at("sign_change").get<bool>());
}

TEST(Cli, CvdExplicitNodes) {
  const auto r = cli("cvd --x 1/18,1/9,1/6 --y 13/30,10/9,7/6");
  ASSERT_EQ(r.status, 0);
  EXPECT_GT(Json::parse(r.out).at("det_plus").at("value").get<double>(), 1.09e-6);
}

TEST(Cli, ExitCodes) {
  auto r = cli("width --q 1.2 --beta 0 --n 1");
  EXPECT_EQ(r.status, 2);
  EXPECT_TRUE(Json::parse(r.out).contains("error"));
  EXPECT_EQ(cli("width --q 0.5").status, 2);
  EXPECT_EQ(cli("bogus").status, 2);
  EXPECT_EQ(cli("threshold --q 0.95 --cap 1000").status, 3);
  EXPECT_EQ(cli("verify-cy2n --q 0.2 --beta 0 --n 4 --y 0 --path lemma1").status, 4);
  EXPECT_EQ(cli("sweep --config /nonexistent.json").status, 2);
}

TEST(Cli, SweepToFile) {
  const auto dir = std::filesystem::temp_directory_path() / ("kwidth-cli-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto config = dir / "sweep.json";
  const auto output = dir / "out.csv";
  std::ofstream(config) << R"({"q": [0.3], "beta": [0, 1], "n": [1, 2], "workers": 2, "output": ")"
                        << output.string() << R"("})";
  ASSERT_EQ(cli("sweep --no-timestamp --config " + config.string()).status, 0);
  std::ifstream in(output);
  std::string line;
  int count = 0;
  while (std::getline(in, line)) ++count;
  EXPECT_EQ(count, 5);
  std::filesystem::remove_all(dir);
}
