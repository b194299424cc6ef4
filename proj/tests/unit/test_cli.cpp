#include "helpers.hpp"

#include "cli.hpp"
#include "ngm/catalog.hpp"
#include "ngm/io.hpp"
#include "ngm/measure.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <sstream>

using namespace ngm;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json cli_json(const std::vector<std::string>& args) {
  const auto r = run_cli(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return json::parse(r.out);
}

std::string tmp_path(const std::string& name) {
  std::filesystem::create_directories(NGM_TEST_TMPDIR);
  return std::string(NGM_TEST_TMPDIR) + "/cli_" + name;
}

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    ADD_FAILURE() << "no column " << name;
    return 0;
  }
};

Csv parse_csv(const std::string& text) {
  Csv c;
  std::istringstream is(text);
  std::string line;
  auto cells = [](const std::string& l) {
    std::vector<std::string> v;
    std::istringstream ls(l);
    std::string cell;
    while (std::getline(ls, cell, ',')) v.push_back(cell);
    return v;
  };
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (c.columns.empty())
      c.columns = cells(line);
    else
      c.rows.push_back(cells(line));
  }
  return c;
}

std::string save_preset(const ExperimentPreset& p, const std::string& name) {
  const std::string path = tmp_path(name);
  write_text_file(path, preset_to_json(p));
  return path;
}

std::string error_kind(const Result& r) { return json::parse(r.err)["error"]["kind"].get<std::string>(); }

}  // namespace

TEST(Measure, Vacuum) {
  const auto doc = cli_json({"measure", "--preset", "vacuum"});
  EXPECT_NEAR(doc["re_mu"].get<double>(), 0.0, 1e-6);
  EXPECT_NEAR(doc["im_mu"].get<double>(), 0.0, 1e-9);
  EXPECT_TRUE(doc["warnings"].empty());
}

TEST(Measure, FockFile) {
  const std::string path = tmp_path("one_photon.json");
  write_text_file(path, R"({"dim": 2, "re": [[0, 0], [0, 1]], "im": [[0, 0], [0, 0]]})");
  const auto doc = cli_json({"measure", "--fock-file", path});
  EXPECT_NEAR(doc["im_mu"].get<double>(), std::acos(-1.0) * (2 * std::exp(-0.5) - 1), 1e-4);
  EXPECT_GT(doc["neg_volume"].get<double>(), 0.2);
}

TEST(Measure, CatMatchesLibraryExactly) {
  const auto r = run_cli({"measure", "--cat", "1.5", "--parity", "even"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lib = ngm::ngm(FockDensityMatrix::pure(cat(1.5, Parity::Even, 40)), GridOptions{});
  EXPECT_EQ(r.out, measure_to_json(lib));
}

TEST(Measure, OutFileMatchesStdout) {
  const std::string path = tmp_path("sub/vacuum.json");
  const auto r = run_cli({"measure", "--preset", "fock:2", "--grid-points", "129", "--out", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_text_file(path), r.out);
}

TEST(State, FileRoundTripThroughMeasure) {
  const std::string path = tmp_path("cat_state.json");
  ASSERT_EQ(run_cli({"state", "--cat", "1.2", "--parity", "odd", "--cutoff", "30", "--out", path}).code, 0);
  const auto from_file = run_cli({"measure", "--fock-file", path, "--grid-points", "129"});
  const auto direct = run_cli({"measure", "--cat", "1.2", "--parity", "odd", "--cutoff", "30", "--grid-points", "129"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(from_file.out, direct.out);
}

TEST(State, WignerDumps) {
  const std::string csv = tmp_path("w.csv"), bin = tmp_path("w.ngmw");
  const auto r = run_cli({"state", "--preset", "fock:1", "--grid-points", "65", "--wigner-csv", csv, "--wigner-bin", bin});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_text_file(csv).substr(0, 17), "q,p,w,dw_dq,dw_dp");
  const auto field = read_wigner_binary(bin);
  EXPECT_EQ(field.grid.n_q(), 65u);
  EXPECT_TRUE(field.grad_q.has_value());
}

TEST(Sweep, GkpSchema) {
  auto p = preset_gkp_family({4.0}, {0, 1}, 4, 60);
  p.grid.points = 129;
  const auto r = run_cli({"sweep", "--preset-file", save_preset(p, "gkp.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = parse_csv(r.out);
  EXPECT_EQ(csv.columns, (std::vector<std::string>{"delta_db", "logical", "re_mu", "im_mu", "neg_volume"}));
  ASSERT_EQ(csv.rows.size(), 2u);
  EXPECT_EQ(csv.rows[1][1], "1");
  EXPECT_NE(r.out.find("# delta_convention="), std::string::npos);
}

TEST(Sweep, QuditTauOneRowEqualsMeasure) {
  const auto p = preset_random_qudits({2, 3}, 1, 2024, LossSweep{{1.0, 0.5}, 0.001});
  const auto r = run_cli({"sweep", "--preset-file", save_preset(p, "qudits.json"), "--grid-points", "129"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = parse_csv(r.out);
  ASSERT_EQ(csv.rows.size(), 4u);
  int checked = 0;
  for (const auto& row : csv.rows) {
    if (row[csv.col("tau")] != "1") continue;
    const auto doc = cli_json({"measure", "--preset", "qudit:" + row[csv.col("d")], "--seed", row[csv.col("seed")],
                               "--grid-points", "129"});
    EXPECT_EQ(std::stod(row[csv.col("re_mu")]), doc["re_mu"].get<double>());
    EXPECT_EQ(std::stod(row[csv.col("im_mu")]), doc["im_mu"].get<double>());
    ++checked;
  }
  EXPECT_EQ(checked, 2);
}

TEST(Sweep, RerunIsByteIdentical) {
  const std::vector<std::string> args{"sweep", "--preset", "qubit-hemisphere", "--grid-points", "65"};
  const auto a = run_cli(args);
  auto b_args = args;
  b_args.insert(b_args.begin(), {"--workers", "2"});
  const auto b = run_cli(b_args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);

  const std::string dir = tmp_path("sweep_out");
  const auto c = run_cli({"sweep", "--preset", "qubit-hemisphere", "--grid-points", "65", "--out", dir});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(read_text_file(dir + "/qubit-hemisphere.csv"), a.out);
}

TEST(Sweep, SeedOverride) {
  const std::string saved = tmp_path("qudit_saved.json");
  const auto r = run_cli({"sweep", "--preset", "qudit-loss", "--seed", "7", "--grid-points", "65", "--save-preset", saved,
                      "--engine", "fock"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto p = preset_from_json(read_text_file(saved));
  EXPECT_EQ(p.tuples[0][2], 7 + 2000);
  EXPECT_EQ(run_cli({"sweep", "--preset", "cat", "--seed", "7"}).code, cli::kConfigError);
}

TEST(Fisher, Vacuum) {
  const auto doc = cli_json({"fisher", "--preset", "vacuum"});
  EXPECT_NEAR(doc["trace_J"].get<double>(), 4.0, 2e-3);
  EXPECT_NEAR(doc["trace_Vinv"].get<double>(), 4.0, 2e-3);
  EXPECT_TRUE(doc["cramer_rao"]["passes"].get<bool>());
}

TEST(Fisher, FockSweepRows) {
  const auto r = run_cli({"fisher", "--fock-sweep", "--fock-max", "3", "--grid-points", "257"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = parse_csv(r.out);
  ASSERT_EQ(csv.rows.size(), 4u);
  for (const auto& row : csv.rows) {
    EXPECT_GE(std::stod(row[csv.col("trace_J")]), std::stod(row[csv.col("trace_Vinv")]) - 1e-3) << row[0];
    EXPECT_LT(std::stod(row[csv.col("relative_change")]), 5e-2) << row[0];
  }
}

TEST(Fisher, DeBruijnOnFockOne) {
  const auto doc = cli_json({"fisher", "--preset", "fock:1", "--debruijn"});
  EXPECT_TRUE(doc["debruijn"]["agrees"].get<bool>()) << doc["debruijn"].dump();
  EXPECT_LT(doc["debruijn"]["rel_error"].get<double>(), 2e-2);
  EXPECT_TRUE(doc["measure_derivative"]["agrees"].get<bool>()) << doc["measure_derivative"].dump();
  EXPECT_TRUE(doc["measure_derivative"]["condition_sign_consistent"].get<bool>());
  EXPECT_FALSE(doc["cramer_rao"]["applicable"].get<bool>());
}

TEST(Channel, IdentityLeavesMeasureUnchanged) {
  const auto doc = cli_json({"channel", "--preset", "fock:1", "--tau", "1", "--grid-points", "129"});
  EXPECT_EQ(doc["before"]["re_mu"], doc["after"]["fock"]["re_mu"]);
  EXPECT_EQ(doc["before"]["im_mu"], doc["after"]["fock"]["im_mu"]);
}

TEST(Channel, HalfLossRemovesNegativity) {
  const auto doc = cli_json({"channel", "--preset", "fock:1", "--tau", "0.5", "--grid-points", "257"});
  const double before = doc["before"]["im_mu"].get<double>();
  const double after = doc["after"]["fock"]["im_mu"].get<double>();
  EXPECT_LT(after, before);
  EXPECT_LT(after, 1e-3);
}

TEST(Channel, BothEnginesAgreeOnCat) {
  const auto r = run_cli({"channel", "--cat", "1.5", "--tau", "0.7", "--engine", "both"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_LT(std::abs(doc["delta"]["re_mu"].get<double>()), 2e-3);
  EXPECT_LT(std::abs(doc["delta"]["im_mu"].get<double>()), 2e-3);
  EXPECT_TRUE(doc["delta"]["consistent"].get<bool>());
}

TEST(Channel, MismatchExitsWithFour) {
  const auto r = run_cli({"channel", "--preset", "fock:1", "--tau", "0.8", "--engine", "both", "--tolerance", "1e-14",
                      "--grid-points", "129"});
  EXPECT_EQ(r.code, cli::kEngineMismatch);
  EXPECT_FALSE(json::parse(r.out)["delta"]["consistent"].get<bool>());
  EXPECT_EQ(error_kind(r), "inconsistency");
}

TEST(ExitCodes, ConfigAndParse) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"measure"},
           {"measure", "--preset", "vacuum", "--cat", "1"},
           {"measure", "--preset", "warp:9"},
           {"measure", "--preset", "gkp"},
           {"measure", "--preset", "vacuum", "--grid-points", "10"},
           {"sweep", "--preset", "nope"},
           {"channel", "--preset", "vacuum", "--tau", "1.5"},
           {"channel", "--preset", "vacuum"},
           {"frobnicate"},
           {"measure", "--fock-file", "/nonexistent/state.json"}}) {
    const auto r = run_cli(args);
    EXPECT_EQ(r.code, cli::kConfigError) << args[0] << " " << (args.size() > 1 ? args.back() : "");
    EXPECT_EQ(json::parse(r.err)["exit_code"].get<int>(), cli::kConfigError);
  }
  const std::string bad = tmp_path("bad.json");
  write_text_file(bad, "{\"dim\": 2, \"re\": [1");
  const auto r = run_cli({"measure", "--fock-file", bad});
  EXPECT_EQ(r.code, cli::kConfigError);
  EXPECT_EQ(error_kind(r), "parse");
}

TEST(ExitCodes, NumericalPreconditions) {
  const std::string path = tmp_path("unnormalized.json");
  write_text_file(path, R"({"dim": 2, "re": [1.0, 1.0], "im": [0, 0]})");
  const auto r = run_cli({"measure", "--fock-file", path});
  EXPECT_EQ(r.code, cli::kPreconditionError);
  EXPECT_EQ(error_kind(r), "normalization");
  EXPECT_TRUE(r.out.empty());

  const auto trunc = run_cli({"measure", "--preset", "coherent:3", "--cutoff", "10"});
  EXPECT_EQ(trunc.code, cli::kPreconditionError) << trunc.err;
  EXPECT_EQ(error_kind(trunc), "truncation");
}

TEST(ExitCodes, HelpAndPresetListing) {
  const auto h = run_cli({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("measure"), std::string::npos);

  const auto l = run_cli({"preset", "--list"});
  EXPECT_EQ(l.code, 0);
  EXPECT_NE(l.out.find("qudit-loss\n"), std::string::npos);
  const auto g = run_cli({"preset", "--name", "gkp"});
  EXPECT_EQ(preset_from_json(g.out).tuples.size(), 14u);
}

TEST(Warnings, GkpLeakageIsReported) {
  const auto doc = cli_json({"measure", "--preset", "gkp:10:0", "--grid-points", "257"});
  ASSERT_FALSE(doc["warnings"].empty());
  EXPECT_NE(doc["warnings"][0].get<std::string>().find("Fock cutoff"), std::string::npos);
  const auto quiet = cli_json({"measure", "--preset", "gkp:4:0", "--grid-points", "129"});
  EXPECT_TRUE(quiet["warnings"].empty());
}
