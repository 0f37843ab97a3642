#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "regenperm/perm.hpp"
#include "regenperm/report.hpp"
#include "regenperm_cli/cli.hpp"
#include "regenperm_cli/verify.hpp"

using namespace regenperm;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "regenperm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

const std::string kGeo = R"({"family":"p-shifted","driver":{"kind":"geometric","q":0.5}})";

}  // namespace

TEST(Cli, SampleLinesAreInjective) {
  const auto r = call({"sample", "--model", kGeo, "--n", "10", "--seed", "7", "--count", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  for (const auto& l : ls) {
    const auto j = json::parse(l);
    const auto images = j.at("images").get<std::vector<std::uint64_t>>();
    EXPECT_EQ(images.size(), 10u);
    EXPECT_TRUE(is_injective(images));
    EXPECT_EQ(j.at("splits").get<std::vector<std::size_t>>(), splitting_times(images));
  }
}

TEST(Cli, DegenerateDriverGivesIdentity) {
  const auto r = call({"sample", "--model", R"({"family":"p-shifted","driver":{"kind":"fixed","p":[1.0]}})", "--n",
                       "5", "--count", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& l : lines(r.out))
    EXPECT_EQ(json::parse(l).at("images"), json::parse("[1,2,3,4,5]"));
}

TEST(Cli, MissingDriverIsConfigError) {
  const auto r = call({"sample", "--model", R"({"family":"p-shifted"})", "--n", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("model.driver"), std::string::npos) << r.err;
}

TEST(Cli, BadUsage) {
  EXPECT_EQ(call({"sample", "--bogus"}).code, 2);
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"--help"}).code, 0);
  EXPECT_EQ(call({"exact", "no-such-topic"}).code, 2);
  EXPECT_EQ(call({"exact", "kaluza", "--u", "1,0.9,0.5"}).code, 2);
}

TEST(Cli, ExactGem1U) {
  const auto r = call({"exact", "gem1-u", "--k", "5", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  const auto& rows = j.at("tables").at(0).at("rows");
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& row : rows) EXPECT_LT(std::abs(row[1].get<double>() - row[2].get<double>()), 1e-9);
}

TEST(Cli, ExactGemUinfty) {
  const auto r = call({"exact", "gem-uinfty", "--theta", "1", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["tables"][0]["rows"][0][1].get<double>(), 1.0 / 3.0, 1e-15);
}

TEST(Cli, ExactComponentLawRows) {
  const auto r = call({"exact", "component-law", "--n", "7", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  const auto& rows = j["tables"][0]["rows"];
  EXPECT_EQ(rows[2][1], "5");
  EXPECT_EQ(rows[2][2], "4");
  EXPECT_EQ(rows[2][3], "9");
  EXPECT_EQ(rows[6][7], "24129");
}

TEST(Cli, ExactTopicsRender) {
  for (const char* t : {"indecomposable", "mallows", "blocked", "qhat"}) {
    std::vector<std::string> args{"exact", t};
    if (std::string(t) == "qhat") {
      args.push_back("--k");
      args.push_back("4");
    }
    for (const char* f : {"json", "csv", "text"}) {
      auto a = args;
      a.push_back("--format");
      a.push_back(f);
      const auto r = call(a);
      EXPECT_EQ(r.code, 0) << t << ' ' << f << ' ' << r.err;
      EXPECT_FALSE(r.out.empty());
    }
  }
  const auto k = call({"exact", "kaluza", "--u", "1,0.5,0.375", "--format", "json"});
  ASSERT_EQ(k.code, 0) << k.err;
}

TEST(Cli, EstimateTransientDisplacement) {
  const auto r = call({"estimate", "--statistic", "displacement", "--model",
                       R"({"family":"p-shifted","driver":{"kind":"fixed","p":[0.5],"p_inf":0.5}})"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("requires positive recurrence"), std::string::npos) << r.err;
}

TEST(Cli, EstimateGem1Renewal) {
  const auto r = call({"estimate", "--statistic", "renewal", "--model", "gem1", "--n-max", "4", "--samples",
                       "1000000", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = EstimateReport::from_json(json::parse(r.out));
  EXPECT_LT(std::abs(*rep.find("u_2")->z), 4.0);
}

TEST(Cli, SameSeedSameBytes) {
  const std::vector<std::string> args{"estimate", "--statistic", "renewal", "--model", kGeo, "--n-max", "6",
                                      "--samples", "20000", "--seed", "3", "--format", "csv"};
  const auto a = call(args), b = call(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto w = args;
  w.push_back("--workers");
  w.push_back("2");
  const auto c = call(w);
  EXPECT_EQ(lines(a.out).size(), lines(c.out).size());
  EXPECT_EQ(lines(a.out)[1], lines(c.out)[1]);
}

TEST(Cli, SeedFromEnvironment) {
  const std::vector<std::string> args{"sample", "--model", kGeo, "--n", "8", "--count", "4"};
  ::setenv("REGENPERM_SEED", "99", 1);
  const auto env = call(args);
  ::unsetenv("REGENPERM_SEED");
  auto explicit_args = args;
  explicit_args.push_back("--seed");
  explicit_args.push_back("99");
  EXPECT_EQ(env.out, call(explicit_args).out);
  EXPECT_NE(env.out, call(args).out);
}

TEST(Cli, FormatsRoundTrip) {
  const std::vector<std::string> base{"estimate", "--statistic", "cycles", "--model",
                                      R"({"family":"blocked","driver":{"kind":"geometric","q":0.5}})",
                                      "--n", "500", "--j-max", "4", "--samples", "400"};
  auto j = base;
  j.insert(j.end(), {"--format", "json"});
  const auto rj = call(j);
  ASSERT_EQ(rj.code, 0) << rj.err;
  const auto parsed = json::parse(rj.out);
  EXPECT_EQ(EstimateReport::from_json(parsed).to_json(), parsed);
  auto c = base;
  c.insert(c.end(), {"--format", "csv"});
  const auto rc = call(c);
  EXPECT_EQ(lines(rc.out).size(), 5u);
  auto t = base;
  t.insert(t.end(), {"--format", "text"});
  EXPECT_NE(call(t).out.find("C_n_j/n_1"), std::string::npos);
  EXPECT_EQ(call({"exact", "mallows", "--format", "xml"}).code, 2);
}

TEST(Cli, ConfigFileAndOut) {
  const auto dir = ::testing::TempDir();
  const std::string cfg = dir + "/regenperm_model.json", out = dir + "/regenperm_out.json";
  std::ofstream(cfg) << R"({"model": )" << kGeo << "}";
  const auto r = call({"sample", "--config", cfg, "--n", "4", "--count", "2", "--seed", "5", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(written, call({"sample", "--model", kGeo, "--n", "4", "--count", "2", "--seed", "5"}).out);
}

TEST(Verify, CriterionSubsetPasses) {
  cli::VerifyOptions opt;
  for (int id : {1, 2, 5, 10}) {
    const auto r = cli::run_criterion(id, opt);
    EXPECT_TRUE(r.passed) << id;
    EXPECT_FALSE(r.lines.empty());
  }
  EXPECT_THROW(cli::parse_tier("medium"), std::exception);
}
