#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kronstat/oracles.hpp"
#include "kronstat/serialization.hpp"
#include "test_support.hpp"

namespace kronstat {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("kronstat_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  Outcome run(const std::string& args) const {
    const std::string cmd = std::string(KRONSTAT_CLI_PATH) + " " + args + " > " + path("stdout").string() + " 2> " +
                            path("stderr").string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(path("stdout")), slurp(path("stderr"))};
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  void write_normal_csv(const std::string& name, std::size_t n, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::ofstream out(path(name));
    out << "a,b\n";
    out.precision(17);
    for (std::size_t i = 0; i < n; ++i) out << z(rng) << ',' << z(rng) << '\n';
  }

  static std::vector<std::vector<double>> parse_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);  // header
    while (std::getline(ss, line)) {
      std::vector<double> row;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
      rows.push_back(row);
    }
    return rows;
  }

  fs::path dir_;
};

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(run("--help").code, 0); }

TEST_F(CliTest, MissingSubcommandIsUsageError) {
  const Outcome r = run("");
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(Json::accept(r.err)) << r.err;
}

TEST_F(CliTest, FitGaussianSampleHasSmallHigherCoefficients) {
  const std::size_t n = 20000;
  write_normal_csv("gauss.csv", n, 42);
  const Outcome r = run("fit --input " + path("gauss.csv").string() + " --header --order 4 --output " +
                    path("model.json").string() + " --diagnostics " + path("diag.json").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const Json diag = read_json_file(path("diag.json").string());
  // each entry of α(k) has sampling variance about k!/n, so its norm over d^k entries is about sqrt(k! d^k / n)
  for (const auto& [k, entries] : {std::pair<int, double>{3, 8.0}, {4, 16.0}}) {
    const double bound = 5.0 * std::sqrt(std::tgamma(k + 1.0) * entries / static_cast<double>(n));
    EXPECT_LT(diag.at("alpha_norms").at(std::to_string(k)).get<double>(), bound) << k;
  }
  EXPECT_GE(diag.at("negative_mass_fraction").get<double>(), 0.0);
  EXPECT_TRUE(diag.at("cumulant_norms").contains("4"));
  const Json model = read_json_file(path("model.json").string());
  EXPECT_EQ(model.at("dim"), 2);
  EXPECT_EQ(model.at("max_order"), 4);
}

TEST_F(CliTest, FitIsByteDeterministic) {
  write_normal_csv("gauss.csv", 3000, 7);
  const std::string base = "fit --input " + path("gauss.csv").string() + " --header --order 5 ";
  ASSERT_EQ(run(base + "--output " + path("a.json").string()).code, 0);
  ASSERT_EQ(run(base + "--output " + path("b.json").string()).code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
}

TEST_F(CliTest, FitInputErrors) {
  write("short.csv", "1,2,3\n4,5,6\n");
  EXPECT_EQ(run("fit --input " + path("short.csv").string()).code, 2);
  write_normal_csv("gauss.csv", 100, 1);
  EXPECT_EQ(run("fit --input " + path("gauss.csv").string() + " --header --order 11").code, 2);
  EXPECT_EQ(run("fit --input " + path("gauss.csv").string() + " --header --order 1").code, 2);
  EXPECT_EQ(run("fit --input " + path("gauss.csv").string() + " --header --dim 3").code, 2);
  EXPECT_EQ(run("fit --input " + path("gauss.csv").string() + " --header --reference student").code, 2);
  write("bad.csv", "1,2\n3,x\n");
  const Outcome r = run("fit --input " + path("bad.csv").string());
  EXPECT_EQ(r.code, 2);
  const Json err = Json::parse(r.err);
  EXPECT_EQ(err.at("error"), "input");
  EXPECT_NE(err.at("message").get<std::string>().find("line 2"), std::string::npos);
}

TEST_F(CliTest, FitSingularCovarianceIsNumericalError) {
  write("collinear.csv", "1,2\n2,4\n3,6\n4,8\n5,10\n");
  const Outcome r = run("fit --input " + path("collinear.csv").string());
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(Json::parse(r.err).at("error"), "numerical");
}

TEST_F(CliTest, FitWithMixtureReference) {
  write_normal_csv("gauss.csv", 2000, 3);
  write("mix.json", R"({"kind":"gaussian_mixture","components":[
      {"weight":0.5,"mean":[-0.5,0],"cov":[[0.75,0],[0,1]]},
      {"weight":0.5,"mean":[0.5,0],"cov":[[0.75,0],[0,1]]}]})");
  const Outcome r = run("fit --input " + path("gauss.csv").string() + " --header --order 4 --reference mixture:" +
                    path("mix.json").string() + " --output " + path("model.json").string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_json_file(path("model.json").string()).at("reference").at("kind"), "gaussian_mixture");
}

TEST_F(CliTest, EvalZeroDeltaGivesReference) {
  const auto ref = ReferenceDensity::gaussian(GaussianParams::standard(2));
  write_json_file(path("m.json").string(), to_json(make_expansion(CumulantDelta(2, 4), ref, AffineMap::identity(2))));
  const Outcome r = run("eval --input " + path("m.json").string() + " --grid -2:2:5,-1:1:3");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "x_1,x_2,f_hat");
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 15u);
  for (const auto& row : rows) EXPECT_EQ(row[2], ref.pdf(Eigen::Vector2d(row[0], row[1])));
}

TEST_F(CliTest, EvalCharFnAtOrigin) {
  const auto ref = ReferenceDensity::gaussian(GaussianParams::standard(1));
  CumulantDelta d(1, 4);
  d.set(3, KronVector(1, 3, {0.5}));
  write_json_file(path("m.json").string(), to_json(make_expansion(d, ref, AffineMap::identity(1))));
  const Outcome r = run("eval --charfn --input " + path("m.json").string() + " --grid 0:0:1");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "lambda_1,re,im\n0,1,0\n");
}

TEST_F(CliTest, EvalStandardizedExponentialMatchesScalarOracle) {
  CumulantSet c(1, 4);
  const std::vector<double> cz = {0, 0, 1, 2, 6};
  for (std::size_t k = 1; k <= 4; ++k) c.set(k, KronVector(1, k, {cz[k]}));
  write_json_file(path("m.json").string(), to_json(gca_model(c, 4)));
  const Outcome r = run("eval --input " + path("m.json").string() + " --grid -4:4:81 --output " + path("f.csv").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(slurp(path("f.csv")));
  ASSERT_EQ(rows.size(), 81u);
  for (const auto& row : rows) EXPECT_NEAR(row[1], oracle::scalar_gca_density(row[0], cz, 4), 1e-10);
}

TEST_F(CliTest, EvalPointsFileAndDeterminism) {
  const auto ref = ReferenceDensity::gaussian(GaussianParams::standard(2));
  CumulantDelta d(2, 3);
  d.set(3, KronVector(2, 3, std::vector<double>(8, 0.1)));
  write_json_file(path("m.json").string(), to_json(make_expansion(d, ref, AffineMap::identity(2))));
  write("pts.csv", "x,y\n0.1,0.2\n-1,0.5\n");
  const std::string args = "eval --input " + path("m.json").string() + " --points " + path("pts.csv").string() + " --header";
  const Outcome a = run(args), b = run(args + " --workers 3");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(parse_csv(a.out).size(), 2u);
}

TEST_F(CliTest, EvalMismatchErrors) {
  const auto ref = ReferenceDensity::gaussian(GaussianParams::standard(2));
  write_json_file(path("m.json").string(), to_json(make_expansion(CumulantDelta(2, 3), ref, AffineMap::identity(2))));
  EXPECT_EQ(run("eval --input " + path("m.json").string() + " --grid 0:1:3,0:1:3,0:1:3").code, 2);
  EXPECT_EQ(run("eval --input " + path("m.json").string() + " --grid 0:1").code, 2);
  EXPECT_EQ(run("eval --input " + path("m.json").string()).code, 2);
  write("pts.csv", "1,2,3\n");
  EXPECT_EQ(run("eval --input " + path("m.json").string() + " --points " + path("pts.csv").string()).code, 2);
  write("notmodel.json", R"({"kind":"moments"})");
  EXPECT_EQ(run("eval --input " + path("notmodel.json").string() + " --grid 0:1:3").code, 2);
}

TEST_F(CliTest, ConvertCumulantsToMomentsAndBack) {
  write("c.json", R"({"kind":"cumulants","dim":1,"max_order":3,"vectors":{"1":[0.5],"2":[2.0],"3":[0.1]}})");
  Outcome r = run("convert --input " + path("c.json").string() + " --output " + path("m.json").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const Json m = read_json_file(path("m.json").string());
  EXPECT_EQ(m.at("kind"), "moments");
  EXPECT_DOUBLE_EQ(m.at("vectors").at("2")[0].get<double>(), 2.25);
  r = run("convert --input " + path("m.json").string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out).at("vectors").at("3")[0].get<double>(), 0.1, 1e-15);
}

TEST_F(CliTest, ConvertKindHandling) {
  write("nokind.json", R"({"dim":1,"max_order":2,"vectors":{"1":[0.0],"2":[1.0]}})");
  EXPECT_EQ(run("convert --input " + path("nokind.json").string()).code, 2);
  const Outcome r = run("convert --input " + path("nokind.json").string() + " --from delta");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out).at("kind"), "alpha");
  write("c.json", R"({"kind":"cumulants","dim":1,"max_order":2,"vectors":{"1":[0.0],"2":[1.0]}})");
  EXPECT_EQ(run("convert --input " + path("c.json").string() + " --from moments").code, 2);
  EXPECT_EQ(run("convert --input " + path("c.json").string() + " --to alpha").code, 2);
}

TEST_F(CliTest, ValidateSubset) {
  const Outcome r = run("validate --only hermite");
  EXPECT_EQ(r.code, 0) << r.out;
  const Json report = Json::parse(r.out);
  EXPECT_TRUE(report.at("pass").get<bool>());
  ASSERT_GT(report.at("checks").size(), 0u);
  for (const auto& c : report.at("checks")) EXPECT_EQ(c.at("suite"), "hermite");
}

TEST_F(CliTest, ValidateDetectsInjectedGoldenFault) {
  EXPECT_EQ(run("validate --only golden").code, 0);
  const Outcome r = run("validate --only golden --inject-fault golden");
  EXPECT_EQ(r.code, 4);
  const Json report = Json::parse(r.out);
  EXPECT_FALSE(report.at("pass").get<bool>());
  bool recursion_failed = false;
  for (const auto& c : report.at("checks"))
    if (c.at("check").get<std::string>().rfind("recursion vs table", 0) == 0 && !c.at("pass").get<bool>())
      recursion_failed = true;
  EXPECT_TRUE(recursion_failed);
}

TEST_F(CliTest, ValidateUnknownSuite) { EXPECT_EQ(run("validate --only nonsense").code, 2); }

TEST_F(CliTest, BudgetEnvironmentVariable) {
  write_normal_csv("gauss.csv", 200, 5);
  const std::string cmd = "KRON_BUDGET=10 " + std::string(KRONSTAT_CLI_PATH) + " fit --header --order 4 --input " +
                          path("gauss.csv").string() + " > /dev/null 2> " + path("err").string();
  const int status = std::system(cmd.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 2);
  EXPECT_EQ(Json::parse(slurp(path("err"))).at("error"), "resource");
}

}  // namespace
}  // namespace kronstat
