#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "gnpb/pdl.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gnpb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = gnpb::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST(Cli, ListsBuiltins) {
  const auto r = cli({"list"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("B_IIb_33"), std::string::npos);
  EXPECT_NE(r.out.find("remark2"), std::string::npos);
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({"verify", "nope"}).code, 1);
  EXPECT_EQ(cli({"classify", "missing.json"}).code, 1);
  EXPECT_EQ(cli({"tiles", "B_II_33", "--cut", "AB"}).code, 1);
  EXPECT_EQ(cli({"tiles", "B_II_33", "--cut", "AB|B"}).code, 1);
  EXPECT_EQ(cli({"verify", "prop6", "--tol", "-1"}).code, 1);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, ClassifyTypeI) {
  const auto r = cli({"classify", "B_I_43", "--json"});
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["verdict"], "TypeI");
  EXPECT_EQ(doc["singles"][0]["witness"][0]["projector"], "|3><3|");
  EXPECT_EQ(doc["singles"][0]["witness"][1]["projector"], "I-|3><3|");
}

TEST(Cli, VerifyExitCodes) {
  EXPECT_EQ(cli({"verify", "prop7"}).code, 0);
  const auto bad = cli({"verify", "prop6", "--basis", "B_IIb_33"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("B:M/C:N"), std::string::npos) << bad.out;
  EXPECT_EQ(cli({"verify", "--all"}).code, 0);
}

TEST(Cli, AccountProp7) {
  const auto r = cli({"account", "prop7", "--json"});
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["total_ebits"].get<double>(), 2 + 8.0 / 27, 1e-11);
  const auto text = cli({"account", "prop7"});
  EXPECT_NE(text.out.find("2.2962962963"), std::string::npos);
  EXPECT_EQ(cli({"account", "prop6", "--basis", "B_IIb_33"}).code, 2);
}

TEST(Cli, VerifyPdlFileAndParseError) {
  const auto good = temp_file("gnpb_cli_good.pdl", gnpb::serialize_pdl(gnpb::builtin_protocol("shift_upb_bc")));
  EXPECT_EQ(cli({"verify", good.string()}).code, 0);
  const auto bad = temp_file("gnpb_cli_bad.pdl", "parties { A:2 }\nbasis shift_upb_222\nmeasure by Q");
  const auto r = cli({"verify", bad.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(":3:"), std::string::npos) << r.err;
}

TEST(Cli, CheckBasisJsonFile) {
  const auto f = temp_file("gnpb_cli_basis.json", gnpb::basis_to_json(gnpb::builtin_basis("bennett_33")));
  const auto r = cli({"check-basis", f.string(), "--json"});
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["completeness_rank"], 9);
  EXPECT_TRUE(doc["passed"].get<bool>());
  const auto bad = temp_file("gnpb_cli_bad_basis.json",
                             R"({"parties":[{"name":"A","dim":2}],"states":[{"label":"x","factors":[[[1,0],[0,0]]]},)"
                             R"({"label":"y","factors":[[[1,0],[1,0]]]}]})");
  EXPECT_EQ(cli({"check-basis", bad.string()}).code, 2);
}

TEST(Cli, Tiles) {
  const auto r = cli({"tiles", "bennett_33", "--cut", "A|B"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("tiles: 5"), std::string::npos);
}

TEST(Cli, ExportMatchesSerializer) {
  const auto r = cli({"export", "prop8"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, gnpb::serialize_pdl(gnpb::builtin_protocol("prop8")));
}
