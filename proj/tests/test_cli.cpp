#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "cubic27/json_io.hpp"

using namespace c27;
using io::json;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  std::string cmd = std::string(CUBIC27_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace

TEST(JsonIo, ParseComplex) {
  EXPECT_EQ(io::parse_complex(std::string("1.5")), Complex(1.5, 0.0));
  EXPECT_EQ(io::parse_complex(std::string("1.5,-2")), Complex(1.5, -2.0));
  EXPECT_EQ(io::parse_complex(std::string(" -0.5 , 3 ")), Complex(-0.5, 3.0));
  EXPECT_EQ(io::parse_complex(std::string("[0.25, 1]")), Complex(0.25, 1.0));
  EXPECT_EQ(io::parse_complex(json(2)), Complex(2.0, 0.0));
  EXPECT_THROW(io::parse_complex(std::string("1.5x")), std::invalid_argument);
  EXPECT_THROW(io::parse_complex(std::string("a,b")), std::invalid_argument);
  EXPECT_THROW(io::parse_complex(json("x")), std::invalid_argument);
}

TEST(JsonIo, ParamsRoundTrip) {
  Params p{{1.0, 2.0}, {-3.0, 0.5}};
  Params q = io::parse_params(io::params_json(p));
  ASSERT_EQ(q.size(), 2u);
  EXPECT_EQ(q[0], p[0]);
  EXPECT_EQ(q[1], p[1]);
  EXPECT_THROW(io::parse_params(json(1)), std::invalid_argument);
}

TEST(JsonIo, PermutationAndEnvelope) {
  Permutation p = Permutation::from_images(std::vector<int>{2, 0, 1});
  EXPECT_EQ(io::permutation_json(p), json::array({2, 0, 1}));
  json e = io::envelope("solve");
  EXPECT_EQ(e["schema_version"], io::kSchemaVersion);
  EXPECT_EQ(e["command"], "solve");
  EXPECT_EQ(e["tolerances"]["match_gap_ratio"], kMatchGapRatio);
  json g = io::group_json(symmetric_group(3));
  EXPECT_EQ(g["order"], 6);
  EXPECT_EQ(g["fingerprint"]["center_order"], 1);
}

TEST(Cli, SolveFermat) {
  CliRun r = run_cli("solve --family Fermat");
  ASSERT_EQ(r.status, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["command"], "solve");
  EXPECT_EQ(j["solve"]["lines"].size(), 27u);
  EXPECT_EQ(j["triangles"], 45);
  EXPECT_EQ(j["srg"], json::array({27, 10, 1, 5}));
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Cli, SchlafliCheckS4WithParam) {
  CliRun r = run_cli("schlafli-check --family S4 --param 2,0.5");
  ASSERT_EQ(r.status, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["automorphisms"], 51840);
  EXPECT_EQ(io::parse_params(j["parameters"])[0], Complex(2.0, 0.5));
}

TEST(Cli, ConstantTrackIsIdentity) {
  CliRun r = run_cli("track --family S4");
  ASSERT_EQ(r.status, 0);
  json j = json::parse(r.out);
  std::vector<int> id(27);
  std::iota(id.begin(), id.end(), 0);
  EXPECT_EQ(j["tracked"]["perm"], json(id));
}

TEST(Cli, TrackWaypoints) {
  CliRun r = run_cli("track --family S4 --waypoints '[[1],[[0.5,0.5]],[[0.5,-0.5]],[1]]'");
  ASSERT_EQ(r.status, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["waypoints"].size(), 4u);
  EXPECT_GE(j["tracked"]["min_gap_ratio"].get<double>(), kMatchGapRatio);
}

TEST(Cli, CampaignWritesFileAtomically) {
  auto dir = std::filesystem::temp_directory_path() / "cubic27_cli_test";
  std::filesystem::create_directories(dir);
  auto out = dir / "s4.json";
  std::filesystem::remove(out);
  CliRun r = run_cli("campaign --family S4 --seed 7 --out " + out.string());
  EXPECT_EQ(r.status, 0);
  ASSERT_TRUE(std::filesystem::exists(out));
  EXPECT_FALSE(std::filesystem::exists(out.string() + ".tmp"));
  std::ifstream f(out);
  json j = json::parse(f);
  EXPECT_EQ(j["report"]["group"]["order"], 4);
  EXPECT_EQ(j["report"]["combined_group"]["order"], 96);
  EXPECT_EQ(j["report"]["exact_sequence"]["verdict"], "direct_product");
}

TEST(Cli, VerifySubsetAndZeroBudget) {
  CliRun ok = run_cli("verify-all --claims S4-coarse,Flexes --seed 7");
  ASSERT_EQ(ok.status, 0);
  json j = json::parse(ok.out);
  ASSERT_EQ(j["claims"].size(), 2u);
  for (const auto& c : j["claims"]) EXPECT_EQ(c["status"], "pass");

  CliRun zero = run_cli("verify-all --budget 0");
  EXPECT_EQ(zero.status, 1);
  json z = json::parse(zero.out);
  for (const auto& c : z["claims"]) EXPECT_EQ(c["status"], "inconclusive");
}

TEST(Cli, Flexes) {
  CliRun r = run_cli("flexes --hesse 2");
  ASSERT_EQ(r.status, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["collinear_triples"].size(), 12u);
  EXPECT_EQ(j["flexes"]["points"].size(), 9u);
}

TEST(Cli, Errors) {
  EXPECT_EQ(run_cli("solve --family Nope").status, 2);
  EXPECT_EQ(run_cli("solve --family S4 --param 1 --param 2").status, 2);
  EXPECT_EQ(run_cli("verify-all --claims Nope").status, 2);
  EXPECT_NE(run_cli("").status, 0);
}
