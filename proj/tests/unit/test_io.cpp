#include "helpers.hpp"

#include "ngm/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

using namespace ngm;
using testing_helpers::expect_error_kind;
using testing_helpers::fock_state;
using testing_helpers::pure;
using testing_helpers::square;

namespace {

std::string tmp_path(const std::string& name) {
  std::filesystem::create_directories(NGM_TEST_TMPDIR);
  return std::string(NGM_TEST_TMPDIR) + "/io_" + name;
}

}  // namespace

TEST(StateJson, DensityMatrixRoundTripIsExact) {
  const auto rho = random_qudit(3, {0, 2, 4}, 99);
  const std::string text = state_to_json(rho);
  const auto back = state_from_json(text);
  EXPECT_EQ(back.entries(), rho.entries());
  EXPECT_EQ(state_to_json(back), text);
}

TEST(StateJson, VectorForm) {
  const auto psi = cat(1.2, Parity::Odd, 30);
  const auto back = state_from_json(state_to_json(psi));
  EXPECT_LT((back.entries() - pure(psi).entries()).norm(), 1e-15);

  const auto hand = state_from_json(R"({"dim": 2, "re": [0.6, 0.0], "im": [0.0, 0.8]})");
  EXPECT_NEAR(hand(0, 1).imag(), -0.48, 1e-15);
  EXPECT_NEAR(hand(1, 1).real(), 0.64, 1e-15);
}

TEST(StateJson, Errors) {
  expect_error_kind([] { state_from_json("[1, 2"); }, ErrorKind::Parse);
  expect_error_kind([] { state_from_json(R"({"re": [1.0]})"); }, ErrorKind::Parse);
  // Well-formed documents describing unphysical states fail validation instead.
  expect_error_kind([] { state_from_json(R"({"dim": 2, "re": [1.0, 1.0], "im": [0, 0]})"); },
                    ErrorKind::Normalization);
  expect_error_kind([] { state_from_json(R"({"dim": 2, "re": [[1, 0], [0, 1]], "im": [[0, 0], [0, 0]]})"); },
                    ErrorKind::Normalization);
  expect_error_kind([] { state_from_json(R"({"dim": 3, "re": [[1, 0], [0, 0]], "im": [[0, 0], [0, 0]]})"); },
                    ErrorKind::Parse);
}

TEST(Files, StateFileRoundTripAndMissingFile) {
  const std::string path = tmp_path("state.json");
  const auto rho = fock_state(2);
  write_state_file(path, rho);
  EXPECT_EQ(read_state_file(path).entries(), rho.entries());
  expect_error_kind([] { read_text_file("/nonexistent/dir/state.json"); }, ErrorKind::Config);
}

TEST(Numbers, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    const std::string s = format_number(v);
    EXPECT_EQ(std::stod(s), v) << s;
  }
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(3.0), "3");
}

TEST(MeasureJson, Fields) {
  const auto v = ngm::ngm(fock_state(1));
  const std::string text = measure_to_json(v);
  for (const char* key : {"\"re_mu\"", "\"im_mu\"", "\"neg_volume\"", "\"moments\"", "\"grid\"", "\"warnings\""})
    EXPECT_NE(text.find(key), std::string::npos) << key;
  EXPECT_NE(text.find(format_number(v.im_mu)), std::string::npos);
}

TEST(Csv, MetadataHeaderRows) {
  CsvTable t;
  t.metadata = {{"preset", "demo"}, {"rows", "2"}};
  t.columns = {"a", "b"};
  t.rows = {{"1", "2"}, {"3", "4"}};
  EXPECT_EQ(to_csv(t), "# preset=demo\n# rows=2\na,b\n1,2\n3,4\n");
}

TEST(Csv, PresetTable) {
  const auto p = preset_cat_family({0.5}, {Parity::Even, Parity::Odd});
  const auto res = run_preset(p);
  const auto table = preset_table(p, res, Engine::Fock);
  EXPECT_EQ(table.columns, (std::vector<std::string>{"alpha", "parity", "re_mu", "im_mu", "neg_volume"}));
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.rows[1][1], "1");
  EXPECT_EQ(table.rows[1][2], format_number(res.rows[1].value.re_mu));
  bool saw_preset = false;
  for (const auto& [k, v] : table.metadata) saw_preset |= k == "preset" && v == p.name;
  EXPECT_TRUE(saw_preset);
}

TEST(WignerDump, CsvLines) {
  const auto f = wigner_gradient(fock_state(1), square(3, 65));
  std::ostringstream os;
  write_wigner_csv(os, f);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "q,p,w,dw_dq,dw_dp");
  EXPECT_EQ(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')), 65u * 65u + 1);
}

TEST(WignerDump, BinaryRoundTrip) {
  const std::string path = tmp_path("field.ngmw");
  const auto f = wigner_gradient(pure(cat(1.0, Parity::Even, 30)), square(5, 65));
  write_wigner_binary(path, f);
  const auto back = read_wigner_binary(path);
  EXPECT_EQ(back.grid.n_q(), f.grid.n_q());
  EXPECT_EQ(back.grid.q_min(), f.grid.q_min());
  EXPECT_TRUE((back.values == f.values).all());
  ASSERT_TRUE(back.grad_q && back.grad_p);
  EXPECT_TRUE((*back.grad_p == *f.grad_p).all());

  const auto plain = wigner_from_fock(fock_state(0), square(5, 65));
  write_wigner_binary(path, plain);
  EXPECT_FALSE(read_wigner_binary(path).grad_q.has_value());

  write_text_file(path, "NGMX garbage");
  expect_error_kind([&] { read_wigner_binary(path); }, ErrorKind::Parse);
}
