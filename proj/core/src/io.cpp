#include "ngm/io.hpp"

#include "ngm/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ngm {

namespace {

using json = nlohmann::json;
using Index = Eigen::Index;

constexpr char kMagic[4] = {'N', 'G', 'M', 'W'};
constexpr std::uint32_t kBinaryVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is, const std::string& path) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  require(static_cast<bool>(is), ErrorKind::Parse, "truncated Wigner dump " + path);
  return v;
}

void put_field(std::ostream& os, const Field& f) {
  for (Index i = 0; i < f.rows(); ++i)
    for (Index j = 0; j < f.cols(); ++j) put(os, f(i, j));
}

Field get_field(std::istream& is, std::size_t n_q, std::size_t n_p, const std::string& path) {
  Field f(static_cast<Index>(n_q), static_cast<Index>(n_p));
  for (Index i = 0; i < f.rows(); ++i)
    for (Index j = 0; j < f.cols(); ++j) f(i, j) = get<double>(is, path);
  return f;
}

std::vector<double> row_of(const json& j, const char* what) {
  require(j.is_array(), ErrorKind::Parse, std::string("state '") + what + "' rows must be arrays");
  std::vector<double> out;
  for (const auto& x : j) {
    require(x.is_number(), ErrorKind::Parse, std::string("state '") + what + "' entries must be numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

std::string state_to_json(const FockDensityMatrix& rho) {
  const CMatrix& m = rho.entries();
  json re = json::array(), im = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ri = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  json doc;
  doc["dim"] = rho.dim();
  doc["re"] = std::move(re);
  doc["im"] = std::move(im);
  return doc.dump() + "\n";
}

std::string state_to_json(const FockVector& psi) {
  json re = json::array(), im = json::array();
  for (Index n = 0; n < psi.amplitudes.size(); ++n) {
    re.push_back(psi.amplitudes(n).real());
    im.push_back(psi.amplitudes(n).imag());
  }
  json doc;
  doc["dim"] = psi.dim();
  doc["re"] = std::move(re);
  doc["im"] = std::move(im);
  return doc.dump() + "\n";
}

FockDensityMatrix state_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("state file is not valid JSON: ") + e.what());
  }
  require(doc.is_object() && doc.contains("dim") && doc.contains("re"), ErrorKind::Parse,
          "state file needs 'dim' and 're' fields");
  require(doc["dim"].is_number_unsigned(), ErrorKind::Parse, "'dim' must be a positive integer");
  const auto dim = doc["dim"].get<std::size_t>();
  require(dim >= 1, ErrorKind::Parse, "'dim' must be a positive integer");
  const json& re = doc["re"];
  const json im = doc.contains("im") ? doc["im"] : json();
  require(re.is_array() && re.size() == dim, ErrorKind::Parse, "'re' must have 'dim' entries");
  require(im.is_null() || (im.is_array() && im.size() == dim), ErrorKind::Parse,
          "'im' must have 'dim' entries");

  const bool vector_form = dim > 0 && re[0].is_number();
  if (vector_form) {
    const std::vector<double> r = row_of(re, "re");
    const std::vector<double> i = im.is_null() ? std::vector<double>(dim, 0.0) : row_of(im, "im");
    FockVector v{CVector(static_cast<Index>(dim))};
    for (std::size_t n = 0; n < dim; ++n) v.amplitudes(static_cast<Index>(n)) = {r[n], i[n]};
    require(std::abs(v.norm() - 1.0) < 1e-8, ErrorKind::Normalization,
            "state vector is not normalized");
    return FockDensityMatrix::pure(v);
  }
  CMatrix m(static_cast<Index>(dim), static_cast<Index>(dim));
  for (std::size_t a = 0; a < dim; ++a) {
    const std::vector<double> r = row_of(re[a], "re");
    const std::vector<double> i = im.is_null() ? std::vector<double>(dim, 0.0) : row_of(im[a], "im");
    require(r.size() == dim && i.size() == dim, ErrorKind::Parse, "density matrix rows must have 'dim' entries");
    for (std::size_t b = 0; b < dim; ++b) m(static_cast<Index>(a), static_cast<Index>(b)) = {r[b], i[b]};
  }
  return FockDensityMatrix(std::move(m));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Config, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Config, "cannot write " + path);
  out << content;
  require(static_cast<bool>(out), ErrorKind::Config, "write failed for " + path);
}

FockDensityMatrix read_state_file(const std::string& path) {
  return state_from_json(read_text_file(path));
}

void write_state_file(const std::string& path, const FockDensityMatrix& rho) {
  write_text_file(path, state_to_json(rho));
}

std::string measure_to_json(const MeasureValue& v) {
  json doc;
  doc["re_mu"] = v.re_mu;
  doc["im_mu"] = v.im_mu;
  doc["re_entropy"] = v.re_entropy;
  doc["gaussian_entropy"] = v.gaussian_entropy;
  doc["neg_volume"] = v.neg_volume;
  doc["moments"] = {{"d", {v.moments.d(0), v.moments.d(1)}},
                    {"V", {{v.moments.V(0, 0), v.moments.V(0, 1)}, {v.moments.V(1, 0), v.moments.V(1, 1)}}}};
  doc["grid"] = {{"q_min", v.grid.q_min()}, {"q_max", v.grid.q_max()}, {"p_min", v.grid.p_min()},
                 {"p_max", v.grid.p_max()}, {"n_q", v.grid.n_q()}, {"n_p", v.grid.n_p()}};
  doc["warnings"] = v.warnings;
  return doc.dump(2) + "\n";
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const CsvTable& t) {
  std::ostringstream os;
  for (const auto& [k, v] : t.metadata) os << "# " << k << "=" << v << "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << "\n";
  for (const auto& row : t.rows) {
    require(row.size() == t.columns.size(), ErrorKind::Shape, "CSV row width does not match the header");
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << "\n";
  }
  return os.str();
}

CsvTable preset_table(const ExperimentPreset& p, const PresetResult& r, Engine engine) {
  CsvTable t;
  t.metadata.emplace_back("preset", p.name);
  t.metadata.emplace_back("recipe", to_string(p.recipe));
  t.metadata.emplace_back("rows", std::to_string(r.rows.size()));
  t.metadata.emplace_back("grid_points", std::to_string(p.grid.points));
  t.metadata.emplace_back("extent_sigmas", format_number(p.grid.extent_sigmas));
  if (p.recipe == Recipe::Cat || p.recipe == Recipe::Gkp) t.metadata.emplace_back("n_c", std::to_string(p.n_c));
  if (p.recipe == Recipe::Gkp) {
    t.metadata.emplace_back("t_max", std::to_string(p.t_max));
    t.metadata.emplace_back("delta_convention", "Delta=10^(-delta_db/20)");
  }
  if (!p.levels.empty()) {
    std::string lv;
    for (int l : p.levels) lv += (lv.empty() ? "" : " ") + std::to_string(l);
    t.metadata.emplace_back("levels", lv);
  }
  if (p.channel) {
    t.metadata.emplace_back("engine", to_string(engine));
    t.metadata.emplace_back("nbar", format_number(p.channel->n_bar));
  }
  for (const auto& w : r.warnings) t.metadata.emplace_back("warning", w);
  t.columns = r.columns;
  for (const auto& row : r.rows) {
    std::vector<std::string> cells;
    for (double x : row.params) cells.push_back(format_number(x));
    if (p.channel) {
      cells.push_back(format_number(row.tau));
      cells.push_back(format_number(row.n_bar));
    }
    cells.push_back(format_number(row.value.re_mu));
    cells.push_back(format_number(row.value.im_mu));
    cells.push_back(format_number(row.value.neg_volume));
    if (p.channel) cells.push_back(to_string(row.engine));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

void write_wigner_csv(std::ostream& os, const WignerField& f) {
  const bool grad = f.grad_q && f.grad_p;
  os << (grad ? "q,p,w,dw_dq,dw_dp\n" : "q,p,w\n");
  for (std::size_t i = 0; i < f.grid.n_q(); ++i)
    for (std::size_t j = 0; j < f.grid.n_p(); ++j) {
      const auto a = static_cast<Index>(i), b = static_cast<Index>(j);
      os << format_number(f.grid.q(i)) << "," << format_number(f.grid.p(j)) << ","
         << format_number(f.values(a, b));
      if (grad) os << "," << format_number((*f.grad_q)(a, b)) << "," << format_number((*f.grad_p)(a, b));
      os << "\n";
    }
}

void write_wigner_binary(const std::string& path, const WignerField& f) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Config, "cannot write " + path);
  out.write(kMagic, 4);
  put(out, kBinaryVersion);
  put(out, static_cast<std::uint64_t>(f.grid.n_q()));
  put(out, static_cast<std::uint64_t>(f.grid.n_p()));
  put(out, f.grid.q_min());
  put(out, f.grid.q_max());
  put(out, f.grid.p_min());
  put(out, f.grid.p_max());
  const bool grad = f.grad_q && f.grad_p;
  put(out, static_cast<std::uint8_t>(grad ? 1 : 0));
  put_field(out, f.values);
  if (grad) {
    put_field(out, *f.grad_q);
    put_field(out, *f.grad_p);
  }
  require(static_cast<bool>(out), ErrorKind::Config, "write failed for " + path);
}

WignerField read_wigner_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Config, "cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  require(in && std::memcmp(magic, kMagic, 4) == 0, ErrorKind::Parse, path + " is not a Wigner dump");
  require(get<std::uint32_t>(in, path) == kBinaryVersion, ErrorKind::Parse,
          "unsupported Wigner dump version in " + path);
  const auto n_q = get<std::uint64_t>(in, path);
  const auto n_p = get<std::uint64_t>(in, path);
  const double q0 = get<double>(in, path), q1 = get<double>(in, path);
  const double p0 = get<double>(in, path), p1 = get<double>(in, path);
  const bool grad = get<std::uint8_t>(in, path) != 0;
  require(n_q >= 3 && n_p >= 3 && n_q % 2 == 1 && n_p % 2 == 1 && n_q * n_p < (1ull << 32),
          ErrorKind::Parse, "implausible grid size in " + path);
  WignerField f{PhaseSpaceGrid(q0, q1, p0, p1, n_q, n_p, GridPolicy{.min_points = 3}),
                get_field(in, n_q, n_p, path), std::nullopt, std::nullopt};
  if (grad) {
    f.grad_q = get_field(in, n_q, n_p, path);
    f.grad_p = get_field(in, n_q, n_p, path);
  }
  return f;
}

}  // namespace ngm
