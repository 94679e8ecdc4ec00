#include <gtest/gtest.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "w11/cli.hpp"

using namespace w11;
using namespace w11::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("w11_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Json read_json(const fs::path& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

// Collects every scalar leaf of a JSON value keyed by its dotted path.
void leaves(const Json& j, const std::string& path, std::map<std::string, std::string>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) leaves(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array() && j.empty()) {
    out[path] = "[]";
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) leaves(j[i], path + "." + std::to_string(i), out);
  } else if (j.is_string()) {
    out[path] = j.get<std::string>();
  } else if (!j.is_null()) {
    out[path] = j.dump();
  }
}

std::map<std::string, std::string> parse_csv(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "path,value");
  while (std::getline(in, line)) {
    auto comma = line.find(',');
    std::string v = line.substr(comma + 1);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
      std::string u;
      for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        u += v[i];
        if (v[i] == '"') ++i;
      }
      v = u;
    }
    out[line.substr(0, comma)] = v;
  }
  return out;
}

}  // namespace

TEST(CliParse, Examples) {
  auto a = parse_invocation({"beta", "--genus", "2", "--markings", "12", "--threads", "3"});
  EXPECT_EQ(a.command, Command::Beta);
  EXPECT_EQ(a.parameters.at("genus"), 2);
  EXPECT_EQ(a.parameters.at("markings"), 12);
  EXPECT_EQ(a.parameters.at("block_order"), false);
  EXPECT_EQ(a.threads, 3u);
  EXPECT_TRUE(a.modular_precheck);

  auto b = parse_invocation({"count", "m0bar", "--n", "6", "--q", "7", "--format", "csv", "--modular-precheck", "off"});
  EXPECT_EQ(b.command, Command::Count);
  EXPECT_EQ(b.action, "m0bar");
  EXPECT_EQ(b.format, Format::Csv);
  EXPECT_FALSE(b.modular_precheck);

  auto c = parse_invocation({"certify", "sweep", "--gmax", "3", "--nmax", "12", "--out", "x"});
  auto d = parse_invocation({"sweep", "--gmax", "3", "--nmax", "12", "--out", "x"});
  EXPECT_EQ(c, d);
}

TEST(CliParse, RenderRoundTrip) {
  for (const auto& ex : usage_examples()) {
    auto inv = parse_invocation(ex);
    EXPECT_EQ(parse_invocation(render(inv)), inv) << ex[0];
  }
  auto inv = parse_invocation({"purity", "--genus", "3", "--markings", "2", "--degree", "6", "--tree", "--timing",
                               "--threads", "2", "--format", "csv"});
  EXPECT_EQ(parse_invocation(render(inv)), inv);
}

TEST(CliParse, Rejections) {
  EXPECT_THROW(parse_invocation({"h11", "dim", "--genus", "0", "--markings", "2"}), UsageError);
  EXPECT_THROW(parse_invocation({"beta", "--genus", "2", "--markings", "12", "--bogus"}), UsageError);
  EXPECT_THROW(parse_invocation({"beta", "--genus", "2"}), UsageError);
  EXPECT_THROW(parse_invocation({"purity", "--genus", "2", "--markings", "2", "--degree", "5"}), UsageError);
  EXPECT_THROW(parse_invocation({"graphs", "enumerate", "--genus", "1", "--markings", "3", "--edges", "3"}), UsageError);
  EXPECT_THROW(parse_invocation({"sweep", "--gmax", "3", "--nmax", "12"}), UsageError);
  EXPECT_THROW(parse_invocation({"frobnicate"}), UsageError);
  EXPECT_THROW(parse_invocation({"count", "approx", "--betti", "1,2", "--dim", "3", "--q", "2"}), UsageError);
  EXPECT_EQ(run({"h11", "dim", "--genus", "0", "--markings", "2"}), exit_code::kUsage);
  EXPECT_EQ(run({}), exit_code::kUsage);
}

TEST(CliParse, ConfigFileAndEnvironment) {
  fs::path dir = scratch("config");
  fs::path cfg = dir / "w11.ini";
  {
    std::ofstream out(cfg);
    out << "threads = 2\nformat = csv\n";
  }
  auto a = parse_invocation({"tau", "--upto", "5", "--config", cfg.string()});
  EXPECT_EQ(a.threads, 2u);
  EXPECT_EQ(a.format, Format::Csv);
  auto b = parse_invocation({"tau", "--upto", "5", "--config", cfg.string(), "--threads", "5"});
  EXPECT_EQ(b.threads, 5u);

  ::setenv("WEIGHT11_CONFIG", cfg.string().c_str(), 1);
  auto c = parse_invocation({"tau", "--upto", "5"});
  ::unsetenv("WEIGHT11_CONFIG");
  EXPECT_EQ(c.threads, 2u);
  EXPECT_EQ(c.format, Format::Csv);
  fs::remove_all(dir);
}

TEST(CliReport, CsvCarriesJsonNumbers) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"h11", "dim", "--genus", "1", "--markings", "13"},
           {"count", "m0bar", "--n", "6", "--q", "7"},
           {"tau", "--upto", "12"},
           {"alpha", "--markings", "12"},
           {"purity", "--genus", "3", "--markings", "4", "--degree", "8"}}) {
    auto inv = parse_invocation(args);
    auto j = report_json(execute(inv));
    std::map<std::string, std::string> expect;
    leaves(j, "", expect);
    EXPECT_EQ(parse_csv(csv_flatten(j)), expect) << args[0];
  }
}

TEST(CliReport, ResultValues) {
  auto h = report_json(execute(parse_invocation({"h11", "dim", "--genus", "1", "--markings", "13"})));
  EXPECT_EQ(h["results"]["dim"], 66);
  EXPECT_EQ(h["schema_version"].is_null(), false);
  auto m = report_json(execute(parse_invocation({"count", "m0bar", "--n", "6", "--q", "7"})));
  EXPECT_EQ(m["results"]["value"], "1240");  // 343 + 784 + 112 + 1
  auto t = report_json(execute(parse_invocation({"tau", "--upto", "4"})));
  EXPECT_EQ(t["results"]["value"], "-1472");
  auto g = report_json(execute(parse_invocation({"genfun", "s12", "--upto", "13"})));
  EXPECT_EQ(g["results"]["coefficients"]["13"], "66");
  EXPECT_EQ(g["results"]["matches_binomial"], true);
  auto a = report_json(execute(parse_invocation({"count", "approx", "--betti", "1,2,2,1,0,0,0", "--dim", "3", "--q", "2"})));
  EXPECT_EQ(a["results"]["value"], "21");
}

TEST(CliRun, ExitCodesAndFiles) {
  fs::path dir = scratch("run");
  fs::path report = dir / "beta.json";
  fs::path matrix = dir / "beta.txt";
  EXPECT_EQ(run({"beta", "--genus", "2", "--markings", "12", "--matrix", matrix.string(), "--out", report.string()}),
            exit_code::kOk);
  auto j = read_json(report);
  EXPECT_EQ(j["results"]["injective"], true);
  EXPECT_EQ(j["results"]["domain_dim"], 330);
  EXPECT_EQ(j["exit_code"], 0);
  EXPECT_TRUE(fs::exists(matrix));

  EXPECT_EQ(run({"tau", "--upto", "3", "--out", "/nonexistent-dir/w11/report.json"}), exit_code::kIo);

  fs::path bundle = dir / "bundle";
  EXPECT_EQ(run({"sweep", "--gmax", "2", "--nmax", "11", "--out", bundle.string()}), exit_code::kOk);
  auto s = read_json(bundle / "report.json");
  EXPECT_EQ(s["results"]["all_genus_ge2_vanish"], true);
  EXPECT_EQ(s["results"]["replay"]["ok"], true);
  EXPECT_TRUE(fs::exists(bundle / "index.json"));
  fs::remove_all(dir);
}
