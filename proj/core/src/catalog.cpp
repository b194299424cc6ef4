#include "ngm/catalog.hpp"

#include "ngm/errors.hpp"
#include "ngm/numerics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ngm {

namespace {

using json = nlohmann::json;

std::vector<std::string> recipe_columns(Recipe r) {
  switch (r) {
    case Recipe::Qubit: return {"r", "theta", "phi"};
    case Recipe::Cat: return {"alpha", "parity"};
    case Recipe::Gkp: return {"delta_db", "logical"};
    case Recipe::Qudit: return {"d", "index", "seed"};
  }
  return {};
}

int as_int(double v, const char* what) {
  require(std::isfinite(v) && v == std::round(v), ErrorKind::Config,
          std::string(what) + " must be an integer");
  return static_cast<int>(v);
}

std::vector<Engine> engines_for(Engine e) {
  if (e == Engine::Both) return {Engine::Fock, Engine::PhaseSpace};
  return {e};
}

std::string describe(const ExperimentPreset& p, const std::vector<double>& t) {
  std::ostringstream os;
  os << p.name << "(";
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ", " : "") << p.columns[i] << "=" << t[i];
  os << ")";
  return os.str();
}

// All rows produced by one parameter tuple, in output order.
std::vector<PresetRow> run_tuple(const ExperimentPreset& p, const std::vector<double>& tuple,
                                 Engine engine) {
  std::vector<std::string> notes;
  const FockDensityMatrix rho = instantiate(p, tuple, &notes);
  std::vector<PresetRow> rows;
  if (!p.channel) {
    PresetRow row;
    row.params = tuple;
    row.value = ngm::ngm(rho, p.grid);
    row.value.warnings.insert(row.value.warnings.begin(), notes.begin(), notes.end());
    rows.push_back(std::move(row));
    return rows;
  }

  std::optional<WignerField> input;
  std::vector<ThermalLossSpec> specs;
  for (double tau : p.channel->taus) specs.emplace_back(tau, p.channel->n_bar);
  for (double tau : p.channel->taus) {
    const ThermalLossSpec spec(tau, p.channel->n_bar);
    for (Engine e : engines_for(engine)) {
      PresetRow row;
      row.params = tuple;
      row.tau = tau;
      row.n_bar = p.channel->n_bar;
      row.engine = e;
      if (e == Engine::PhaseSpace && !input) input = channel_input(rho, specs, p.grid);
      row.value = measure_after_channel(rho, spec, e, p.grid, nullptr, input ? &*input : nullptr);
      rows.push_back(std::move(row));
    }
  }
  // The state itself is shared by every channel row; note its truncation once.
  rows.front().value.warnings.insert(rows.front().value.warnings.begin(), notes.begin(), notes.end());
  return rows;
}

}  // namespace

std::string to_string(Engine e) {
  switch (e) {
    case Engine::Fock: return "fock";
    case Engine::PhaseSpace: return "phasespace";
    case Engine::Both: return "both";
  }
  return "?";
}

Engine engine_from_string(const std::string& s) {
  if (s == "fock") return Engine::Fock;
  if (s == "phasespace") return Engine::PhaseSpace;
  if (s == "both") return Engine::Both;
  fail(ErrorKind::Config, "unknown engine '" + s + "' (expected fock, phasespace or both)");
}

std::string to_string(Recipe r) {
  switch (r) {
    case Recipe::Qubit: return "qubit";
    case Recipe::Cat: return "cat";
    case Recipe::Gkp: return "gkp";
    case Recipe::Qudit: return "qudit";
  }
  return "?";
}

Recipe recipe_from_string(const std::string& s) {
  if (s == "qubit") return Recipe::Qubit;
  if (s == "cat") return Recipe::Cat;
  if (s == "gkp") return Recipe::Gkp;
  if (s == "qudit") return Recipe::Qudit;
  fail(ErrorKind::Config, "unknown state recipe '" + s + "'");
}

ExperimentPreset preset_qubit_hemisphere(std::pair<int, int> levels, const std::vector<double>& r_list,
                                         std::size_t theta_count) {
  require(levels.first != levels.second, ErrorKind::Domain, "qubit levels must be distinct");
  require(levels.first >= 0 && levels.second >= 0, ErrorKind::Domain,
          "qubit levels must be non-negative");
  ExperimentPreset p;
  p.name = "qubit-hemisphere";
  p.recipe = Recipe::Qubit;
  p.columns = recipe_columns(p.recipe);
  p.levels = {levels.first, levels.second};
  for (double r : r_list)
    for (std::size_t k = 0; k < theta_count; ++k) {
      const double theta =
          theta_count == 1 ? 0.0 : std::numbers::pi * static_cast<double>(k) / static_cast<double>(theta_count - 1);
      p.tuples.push_back({r, theta, 0.0});
    }
  return p;
}

ExperimentPreset preset_cat_family(const std::vector<double>& alphas,
                                   const std::vector<Parity>& parities, int n_c) {
  ExperimentPreset p;
  p.name = "cat";
  p.recipe = Recipe::Cat;
  p.columns = recipe_columns(p.recipe);
  p.n_c = n_c;
  for (double a : alphas)
    for (Parity par : parities) p.tuples.push_back({a, par == Parity::Even ? 0.0 : 1.0});
  return p;
}

ExperimentPreset preset_gkp_family(const std::vector<double>& delta_db_list,
                                   const std::vector<int>& logicals, int t_max, int n_c) {
  ExperimentPreset p;
  p.name = "gkp";
  p.recipe = Recipe::Gkp;
  p.columns = recipe_columns(p.recipe);
  p.n_c = n_c;
  p.t_max = t_max;
  for (double db : delta_db_list)
    for (int l : logicals) p.tuples.push_back({db, static_cast<double>(l)});
  return p;
}

ExperimentPreset preset_random_qudits(const std::vector<int>& d_list, std::size_t count,
                                      std::uint64_t seed, std::optional<LossSweep> loss_sweep) {
  require(seed < (std::uint64_t{1} << 52), ErrorKind::Domain, "qudit ensemble seed must be below 2^52");
  ExperimentPreset p;
  p.name = "qudit";
  p.recipe = Recipe::Qudit;
  p.columns = recipe_columns(p.recipe);
  p.channel = std::move(loss_sweep);
  for (int d : d_list)
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint64_t s = seed + 1000 * static_cast<std::uint64_t>(d) + i;
      p.tuples.push_back({static_cast<double>(d), static_cast<double>(i), static_cast<double>(s)});
    }
  return p;
}

std::vector<double> default_tau_sweep() {
  std::vector<double> taus;
  for (int k = 10; k >= 1; --k) taus.push_back(k / 10.0);
  return taus;
}

std::vector<std::string> builtin_preset_names() {
  return {"qubit-hemisphere", "qubit-hemisphere-02", "cat", "gkp", "qudit-loss", "cat-loss", "gkp-loss"};
}

ExperimentPreset builtin_preset(const std::string& name) {
  const std::vector<double> r_list{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  const LossSweep sweep{default_tau_sweep(), 0.001};
  ExperimentPreset p;
  if (name == "qubit-hemisphere") {
    p = preset_qubit_hemisphere({0, 1}, r_list, 9);
  } else if (name == "qubit-hemisphere-02") {
    p = preset_qubit_hemisphere({0, 2}, r_list, 9);
  } else if (name == "cat") {
    std::vector<double> alphas;
    for (int k = 0; k <= 12; ++k) alphas.push_back(0.25 * k);
    p = preset_cat_family(alphas, {Parity::Even, Parity::Odd});
  } else if (name == "gkp") {
    p = preset_gkp_family({2, 4, 6, 8, 10, 12, 14}, {0, 1}, 4, 60);
  } else if (name == "qudit-loss") {
    p = preset_random_qudits({2, 3, 4}, 10, 2024, sweep);
  } else if (name == "cat-loss") {
    p = preset_cat_family({1.5}, {Parity::Even, Parity::Odd});
    p.channel = sweep;
  } else if (name == "gkp-loss") {
    p = preset_gkp_family({10}, {0, 1}, 4, 60);
    p.channel = sweep;
  } else {
    std::string known;
    for (const auto& n : builtin_preset_names()) known += (known.empty() ? "" : ", ") + n;
    fail(ErrorKind::Config, "unknown preset '" + name + "' (known: " + known + ")");
  }
  p.name = name;
  return p;
}

FockDensityMatrix instantiate(const ExperimentPreset& p, const std::vector<double>& t,
                              std::vector<std::string>* warnings) {
  require(t.size() == p.columns.size(), ErrorKind::Config, "parameter tuple does not match preset columns");
  switch (p.recipe) {
    case Recipe::Qubit:
      return apply_qubit_state(t[0], t[1], t[2], p.levels);
    case Recipe::Cat: {
      const int par = as_int(t[1], "cat parity");
      require(par == 0 || par == 1, ErrorKind::Config, "cat parity must be 0 (even) or 1 (odd)");
      return FockDensityMatrix::pure(cat(t[0], par == 0 ? Parity::Even : Parity::Odd, p.n_c));
    }
    case Recipe::Gkp: {
      GkpInfo info;
      FockVector v = gkp_logical(as_int(t[1], "GKP logical"), gkp_delta_from_db(t[0]), p.t_max, p.n_c, &info);
      if (warnings && !info.leakage_warning().empty()) warnings->push_back(info.leakage_warning());
      return FockDensityMatrix::pure(v);
    }
    case Recipe::Qudit: {
      const int d = as_int(t[0], "qudit dimension");
      const double seed = t[2];
      require(d >= 1, ErrorKind::Config, "qudit dimension must be at least 1");
      require(seed >= 0 && seed == std::floor(seed), ErrorKind::Config, "qudit seed must be a non-negative integer");
      std::vector<int> levels;
      if (p.levels.empty()) {
        for (int k = 0; k < d; ++k) levels.push_back(k);
      } else {
        require(p.levels.size() >= static_cast<std::size_t>(d), ErrorKind::Config,
                "preset lists fewer logical levels than the qudit dimension");
        levels.assign(p.levels.begin(), p.levels.begin() + d);
      }
      return random_qudit(static_cast<std::size_t>(d), levels, static_cast<std::uint64_t>(seed));
    }
  }
  fail(ErrorKind::Config, "unknown state recipe");
}

void validate_preset(const ExperimentPreset& p) {
  require(!p.name.empty(), ErrorKind::Config, "preset needs a name");
  require(p.columns == recipe_columns(p.recipe), ErrorKind::Config,
          "preset columns do not match the " + to_string(p.recipe) + " recipe");
  require(p.grid.points >= 3, ErrorKind::Config, "grid needs at least 3 points per axis");
  require(p.grid.extent_sigmas > 0 && p.grid.min_half_width > 0, ErrorKind::Config,
          "grid extent must be positive");
  if (p.recipe == Recipe::Qubit)
    require(p.levels.size() == 2 && p.levels[0] != p.levels[1], ErrorKind::Config,
            "qubit presets need two distinct levels");
  if (p.channel) {
    require(!p.channel->taus.empty(), ErrorKind::Config, "channel sweep needs at least one tau");
    for (double tau : p.channel->taus) {
      try {
        ThermalLossSpec(tau, p.channel->n_bar);
      } catch (const Error& e) {
        fail(ErrorKind::Config, "preset " + p.name + " channel: " + e.what());
      }
    }
  }
  for (const auto& t : p.tuples) {
    try {
      instantiate(p, t);
    } catch (const Error& e) {
      fail(ErrorKind::Config, describe(p, t) + " does not give a valid state: " + e.what());
    }
  }
}

std::string preset_to_json(const ExperimentPreset& p) {
  json j;
  j["name"] = p.name;
  j["recipe"] = to_string(p.recipe);
  j["columns"] = p.columns;
  j["tuples"] = p.tuples;
  j["levels"] = p.levels;
  j["n_c"] = p.n_c;
  j["t_max"] = p.t_max;
  j["grid"] = {{"points", p.grid.points},
               {"extent_sigmas", p.grid.extent_sigmas},
               {"min_half_width", p.grid.min_half_width},
               {"edge_tolerance", p.grid.edge_tolerance}};
  if (p.channel)
    j["channel"] = {{"taus", p.channel->taus}, {"n_bar", p.channel->n_bar}};
  else
    j["channel"] = nullptr;
  return j.dump(2) + "\n";
}

ExperimentPreset preset_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("preset JSON: ") + e.what());
  }
  ExperimentPreset p;
  try {
    p.name = j.at("name").get<std::string>();
    p.recipe = recipe_from_string(j.at("recipe").get<std::string>());
    p.columns = j.value("columns", recipe_columns(p.recipe));
    p.tuples = j.at("tuples").get<std::vector<std::vector<double>>>();
    p.levels = j.value("levels", std::vector<int>{});
    p.n_c = j.value("n_c", p.n_c);
    p.t_max = j.value("t_max", p.t_max);
    if (j.contains("grid")) {
      const json& g = j["grid"];
      p.grid.points = g.value("points", p.grid.points);
      p.grid.extent_sigmas = g.value("extent_sigmas", p.grid.extent_sigmas);
      p.grid.min_half_width = g.value("min_half_width", p.grid.min_half_width);
      p.grid.edge_tolerance = g.value("edge_tolerance", p.grid.edge_tolerance);
    }
    if (j.contains("channel") && !j["channel"].is_null())
      p.channel = LossSweep{j["channel"].at("taus").get<std::vector<double>>(),
                            j["channel"].value("n_bar", 0.001)};
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("preset JSON: ") + e.what());
  }
  validate_preset(p);
  return p;
}

FockDensityMatrix pad_for_channel(const FockDensityMatrix& rho, const ThermalLossSpec& spec) {
  const double spread = (spec.gain() - 1.0) * (static_cast<double>(rho.dim()) + 1.0);
  const auto extra = static_cast<std::size_t>(8.0 + std::ceil(10.0 * spread));
  return rho.embedded(rho.dim() + extra);
}

WignerField channel_input(const FockDensityMatrix& rho, const std::vector<ThermalLossSpec>& specs,
                          const GridOptions& options) {
  WignerField field = wigner_from_fock(rho, auto_grid(rho, options));
  const PhaseSpaceGrid& g = field.grid;
  const Field& w = field.values;
  const double peak = w.cwiseAbs().maxCoeff();
  // Bounding box of |W| > edge_tolerance.
  double q_lo = g.q_max(), q_hi = g.q_min(), p_lo = g.p_max(), p_hi = g.p_min();
  for (std::size_t i = 0; i < g.n_q(); ++i)
    for (std::size_t j = 0; j < g.n_p(); ++j)
      if (std::abs(w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) > options.edge_tolerance) {
        q_lo = std::min(q_lo, g.q(i));
        q_hi = std::max(q_hi, g.q(i));
        p_lo = std::min(p_lo, g.p(j));
        p_hi = std::max(p_hi, g.p(j));
      }
  if (q_lo > q_hi) return field;

  // Blurring a field bounded by `peak` leaks peak*exp(-x^2/(2 var)) past the support.
  const double k = std::sqrt(2.0 * std::max(0.0, std::log(peak / options.edge_tolerance)));
  double lo_q = g.q_min(), hi_q = g.q_max(), lo_p = g.p_min(), hi_p = g.p_max();
  bool wider = false;
  for (const auto& spec : specs) {
    const double root = std::sqrt(spec.tau);
    const double reach = k * std::sqrt((1.0 - spec.tau) * (spec.n_bar + 0.5));
    const double need[4] = {root * q_lo - reach, root * q_hi + reach, root * p_lo - reach, root * p_hi + reach};
    wider |= need[0] < lo_q || need[1] > hi_q || need[2] < lo_p || need[3] > hi_p;
    lo_q = std::min(lo_q, need[0]);
    hi_q = std::max(hi_q, need[1]);
    lo_p = std::min(lo_p, need[2]);
    hi_p = std::max(hi_p, need[3]);
  }
  if (!wider) return field;
  const double half = std::max(hi_q - lo_q, hi_p - lo_p) / 2;
  return wigner_from_fock(rho, PhaseSpaceGrid::centered((lo_q + hi_q) / 2, (lo_p + hi_p) / 2, half, half,
                                                        options.points));
}

MeasureValue measure_after_channel(const FockDensityMatrix& rho, const ThermalLossSpec& spec,
                                   Engine engine, const GridOptions& grid, KrausReport* kraus,
                                   const WignerField* input) {
  require(engine != Engine::Both, ErrorKind::Config, "measure_after_channel runs a single engine");
  if (engine == Engine::Fock) {
    if (spec.tau == 1.0) return ngm::ngm(rho, grid);
    KrausReport rep;
    const FockDensityMatrix out = thermal_loss_fock(pad_for_channel(rho, spec), spec, 0, 0, &rep);
    MeasureValue v = ngm::ngm(out, grid);
    for (const auto& w : rep.warnings) v.warnings.push_back(w);
    if (kraus) *kraus = rep;
    return v;
  }
  if (input) return ngm::ngm(thermal_loss_phase_space(*input, spec));
  return ngm::ngm(thermal_loss_phase_space(channel_input(rho, {spec}, grid), spec));
}

PresetResult run_preset(const ExperimentPreset& p, Engine engine) {
  validate_preset(p);
  const std::size_t n = p.tuples.size();
  std::vector<std::vector<PresetRow>> blocks(n);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) blocks[i] = run_tuple(p, p.tuples[i], engine);
  });

  PresetResult out;
  out.columns = p.columns;
  if (p.channel) {
    out.columns.push_back("tau");
    out.columns.push_back("nbar");
  }
  for (const char* c : {"re_mu", "im_mu", "neg_volume"}) out.columns.push_back(c);
  if (p.channel) out.columns.push_back("engine");

  for (std::size_t i = 0; i < n; ++i)
    for (auto& row : blocks[i]) {
      for (const auto& w : row.value.warnings) {
        std::ostringstream os;
        os << describe(p, row.params);
        if (p.channel) os << " tau=" << row.tau << " " << to_string(row.engine);
        os << ": " << w;
        out.warnings.push_back(os.str());
      }
      out.rows.push_back(std::move(row));
    }
  return out;
}

}  // namespace ngm
