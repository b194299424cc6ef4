#include "cli.hpp"

#include "ngm/catalog.hpp"
#include "ngm/channels.hpp"
#include "ngm/fisher.hpp"
#include "ngm/fock.hpp"
#include "ngm/io.hpp"
#include "ngm/measure.hpp"
#include "ngm/numerics.hpp"
#include "ngm/wigner.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <Eigen/LU>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace ngm::cli {

namespace {

using json = nlohmann::json;

// Cross-engine agreement required by `channel --engine both`.
constexpr double kEngineTolerance = 2e-3;

struct StateSource {
  std::string preset;
  std::string fock_file;
  double cat_alpha = 0.0;
  bool cat_set = false;
  std::string parity = "even";
  int cutoff = 0;  // 0 = family default
  std::uint64_t seed = 1;
};

struct GridFlags {
  std::size_t points = 513;
  double extent_sigmas = 5.0;
  bool points_set = false;
  bool extent_set = false;

  GridOptions options() const {
    GridOptions g;
    g.points = points;
    g.extent_sigmas = extent_sigmas;
    return g;
  }

  void validate() const {
    require(points >= 65, ErrorKind::Config, "--grid-points must be at least 65");
    require(std::isfinite(extent_sigmas) && extent_sigmas > 0, ErrorKind::Config,
            "--extent-sigmas must be positive");
  }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

double number(const std::string& s, const std::string& ctx) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  require(pos == s.size() && !s.empty(), ErrorKind::Config, "bad number '" + s + "' in " + ctx);
  return v;
}

int integer(const std::string& s, const std::string& ctx) {
  const double v = number(s, ctx);
  require(v == std::floor(v) && std::abs(v) < 1e9, ErrorKind::Config, "expected an integer in " + ctx);
  return static_cast<int>(v);
}

Parity parity_from(const std::string& s) {
  if (s == "even") return Parity::Even;
  if (s == "odd") return Parity::Odd;
  fail(ErrorKind::Config, "parity must be 'even' or 'odd'");
}

int cutoff_or(const StateSource& src, int dflt) { return src.cutoff > 0 ? src.cutoff : dflt; }

// vacuum | fock:N | coherent:RE[:IM] | cat:ALPHA[:even|odd] | squeezed:XI
// | displaced-squeezed:RE:IM:XI | gkp:DB:L | qubit:R:THETA:PHI[:L0:L1] | qudit:D
FockDensityMatrix named_state(const std::string& spec, const StateSource& src, std::vector<std::string>& notes) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts.empty() ? spec : parts[0];
  const std::size_t n = parts.size();
  auto arity = [&](std::size_t lo, std::size_t hi) {
    require(n >= lo + 1 && n <= hi + 1, ErrorKind::Config, "wrong number of fields in state '" + spec + "'");
  };
  if (kind == "vacuum") {
    arity(0, 0);
    return FockDensityMatrix::pure(coherent(0.0, 1));
  }
  if (kind == "fock") {
    arity(1, 1);
    const int k = integer(parts[1], spec);
    require(k >= 0 && k <= kDefaultFockCutoff, ErrorKind::Config, "Fock level out of range in '" + spec + "'");
    FockVector v{CVector::Zero(k + 1)};
    v.amplitudes(k) = 1.0;
    return FockDensityMatrix::pure(v);
  }
  if (kind == "coherent") {
    arity(1, 2);
    const Complex a(number(parts[1], spec), n > 2 ? number(parts[2], spec) : 0.0);
    return FockDensityMatrix::pure(coherent(a, cutoff_or(src, 40)));
  }
  if (kind == "cat") {
    arity(1, 2);
    return FockDensityMatrix::pure(
        cat(number(parts[1], spec), parity_from(n > 2 ? parts[2] : "even"), cutoff_or(src, 40)));
  }
  if (kind == "squeezed") {
    arity(1, 1);
    return FockDensityMatrix::pure(displaced_squeezed(0.0, number(parts[1], spec), cutoff_or(src, 60)));
  }
  if (kind == "displaced-squeezed") {
    arity(3, 3);
    const Complex a(number(parts[1], spec), number(parts[2], spec));
    return FockDensityMatrix::pure(displaced_squeezed(a, number(parts[3], spec), cutoff_or(src, 60)));
  }
  if (kind == "gkp") {
    arity(2, 2);
    GkpInfo info;
    FockVector v = gkp_logical(integer(parts[2], spec), gkp_delta_from_db(number(parts[1], spec)), 4,
                               cutoff_or(src, 60), &info);
    if (!info.leakage_warning().empty()) notes.push_back(info.leakage_warning());
    return FockDensityMatrix::pure(v);
  }
  if (kind == "qubit") {
    require(n == 4 || n == 6, ErrorKind::Config, "wrong number of fields in state '" + spec + "'");
    std::vector<int> levels{0, 1};
    if (n == 6) levels = {integer(parts[4], spec), integer(parts[5], spec)};
    require(levels[0] != levels[1] && levels[0] >= 0 && levels[1] >= 0, ErrorKind::Config,
            "qubit levels must be distinct and non-negative");
    return apply_qubit_state(number(parts[1], spec), number(parts[2], spec), number(parts[3], spec), levels);
  }
  if (kind == "qudit") {
    arity(1, 1);
    const int d = integer(parts[1], spec);
    require(d >= 1 && d <= kDefaultFockCutoff, ErrorKind::Config, "qudit dimension out of range");
    std::vector<int> levels;
    for (int k = 0; k < d; ++k) levels.push_back(k);
    return random_qudit(static_cast<std::size_t>(d), levels, src.seed);
  }
  fail(ErrorKind::Config, "unknown state '" + spec + "'");
}

// `notes` collects truncation warnings that must reach the output.
FockDensityMatrix load_state(const StateSource& src, std::vector<std::string>& notes) {
  const int count = (src.preset.empty() ? 0 : 1) + (src.fock_file.empty() ? 0 : 1) + (src.cat_set ? 1 : 0);
  require(count == 1, ErrorKind::Config, "give exactly one of --preset, --fock-file or --cat");
  require(src.cutoff >= 0, ErrorKind::Config, "--cutoff must be positive");
  if (!src.fock_file.empty()) return read_state_file(src.fock_file);
  if (src.cat_set)
    return FockDensityMatrix::pure(cat(src.cat_alpha, parity_from(src.parity), cutoff_or(src, 40)));
  for (const auto& name : builtin_preset_names())
    require(src.preset != name, ErrorKind::Config,
            "'" + name + "' is an experiment preset; run it with the sweep command");
  return named_state(src.preset, src, notes);
}

void add_state_flags(CLI::App* cmd, StateSource& src) {
  cmd->add_option("--preset", src.preset, "Named state (vacuum, fock:N, cat:A:even, gkp:DB:L, ...)");
  cmd->add_option("--fock-file", src.fock_file, "State JSON file");
  cmd->add_option("--cat", src.cat_alpha, "Cat amplitude")->each([&](const std::string&) { src.cat_set = true; });
  cmd->add_option("--parity", src.parity, "Cat parity (even|odd)");
  cmd->add_option("--cutoff", src.cutoff, "Fock cutoff n_c");
  cmd->add_option("--seed", src.seed, "Seed for random states");
}

void add_grid_flags(CLI::App* cmd, GridFlags& g) {
  cmd->add_option("--grid-points", g.points, "Grid points per axis")->each([&](const std::string&) {
    g.points_set = true;
  });
  cmd->add_option("--extent-sigmas", g.extent_sigmas, "Grid half-width in standard deviations")
      ->each([&](const std::string&) { g.extent_set = true; });
}

json measure_json(const MeasureValue& v) { return json::parse(measure_to_json(v)); }

json matrix_json(const Eigen::Matrix2d& m) {
  return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})});
}

// Writes to the --out path if given, then echoes to `out`.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (!path.empty()) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    write_text_file(path, text);
  }
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// measure ---------------------------------------------------------------

struct MeasureCmd {
  StateSource src;
  GridFlags grid;
  std::string out_path;
};

int cmd_measure(const MeasureCmd& c, std::ostream& out) {
  c.grid.validate();
  std::vector<std::string> notes;
  const FockDensityMatrix rho = load_state(c.src, notes);
  MeasureValue v = ngm::ngm(rho, c.grid.options());
  v.warnings.insert(v.warnings.begin(), notes.begin(), notes.end());
  emit(measure_to_json(v), c.out_path, out);
  return kOk;
}

// state -----------------------------------------------------------------

struct StateCmd {
  StateSource src;
  GridFlags grid;
  std::string out_path;
  std::string wigner_csv;
  std::string wigner_bin;
};

int cmd_state(const StateCmd& c, std::ostream& out, std::ostream& err) {
  c.grid.validate();
  std::vector<std::string> notes;
  const FockDensityMatrix rho = load_state(c.src, notes);
  if (!c.wigner_csv.empty() || !c.wigner_bin.empty()) {
    const WignerField w = wigner_gradient(rho, auto_grid(rho, c.grid.options()));
    if (!c.wigner_csv.empty()) {
      std::ofstream f(c.wigner_csv);
      require(static_cast<bool>(f), ErrorKind::Config, "cannot write " + c.wigner_csv);
      write_wigner_csv(f, w);
    }
    if (!c.wigner_bin.empty()) write_wigner_binary(c.wigner_bin, w);
  }
  // The state document has no warnings field.
  for (const auto& w : notes) err << json{{"warning", w}}.dump() << "\n";
  emit(state_to_json(rho), c.out_path, out);
  return kOk;
}

// sweep -----------------------------------------------------------------

struct SweepCmd {
  std::string preset;
  std::string preset_file;
  std::string engine = "fock";
  GridFlags grid;
  int cutoff = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  std::string save_preset;
};

int cmd_sweep(const SweepCmd& c, std::ostream& out) {
  require(c.preset.empty() != c.preset_file.empty(), ErrorKind::Config,
          "give exactly one of --preset or --preset-file");
  c.grid.validate();
  const Engine engine = engine_from_string(c.engine);
  ExperimentPreset p = c.preset.empty() ? preset_from_json(read_text_file(c.preset_file)) : builtin_preset(c.preset);
  if (c.grid.points_set) p.grid.points = c.grid.points;
  if (c.grid.extent_set) p.grid.extent_sigmas = c.grid.extent_sigmas;
  if (c.cutoff > 0) p.n_c = c.cutoff;
  if (c.seed_set) {
    require(p.recipe == Recipe::Qudit, ErrorKind::Config, "--seed only applies to qudit presets");
    for (auto& t : p.tuples) t[2] = static_cast<double>(c.seed + 1000 * static_cast<std::uint64_t>(t[0]) +
                                                        static_cast<std::uint64_t>(t[1]));
  }
  validate_preset(p);
  if (!c.save_preset.empty()) write_text_file(c.save_preset, preset_to_json(p));

  const PresetResult r = run_preset(p, engine);
  const std::string csv = to_csv(preset_table(p, r, engine));
  if (c.out_dir.empty()) {
    out << csv;
  } else {
    std::filesystem::create_directories(c.out_dir);
    const std::string path = (std::filesystem::path(c.out_dir) / (p.name + ".csv")).string();
    write_text_file(path, csv);
    out << path << "\n";
  }
  return kOk;
}

// fisher ----------------------------------------------------------------

struct FisherCmd {
  StateSource src;
  GridFlags grid;
  double band = kDefaultFisherBand;
  bool debruijn = false;
  bool fock_sweep = false;
  int fock_max = 10;
  std::string out_path;
};

json slope_json(const SlopeReport& s, double tolerance) {
  const bool agrees = s.rel_error <= tolerance || s.abs_error <= 1e-3;
  return {{"epsilons", s.epsilons},
          {"slopes", s.slopes},
          {"slope", s.extrapolated_slope},
          {"predicted", s.predicted},
          {"abs_error", s.abs_error},
          {"rel_error", s.rel_error},
          {"tolerance", tolerance},
          {"agrees", agrees}};
}

int cmd_fisher(const FisherCmd& c, std::ostream& out) {
  c.grid.validate();
  require(c.band > 0 && std::isfinite(c.band), ErrorKind::Config, "--band must be positive");
  const GridOptions opts = c.grid.options();

  if (c.fock_sweep) {
    require(c.fock_max >= 0 && c.fock_max <= 40, ErrorKind::Config, "--fock-max must lie in [0, 40]");
    const auto count = static_cast<std::size_t>(c.fock_max + 1);
    std::vector<FisherReport> reports(count);
    std::vector<double> tr_vinv(count);
    parallel_for(count, [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        FockVector v{CVector::Zero(static_cast<Eigen::Index>(k + 1))};
        v.amplitudes(static_cast<Eigen::Index>(k)) = 1.0;
        const FockDensityMatrix rho = FockDensityMatrix::pure(v);
        reports[k] = fisher_matrix(rho, auto_grid(rho, opts), c.band);
        tr_vinv[k] = moments(rho).V.inverse().trace();
      }
    });
    CsvTable t;
    t.metadata.emplace_back("grid_points", std::to_string(opts.points));
    t.metadata.emplace_back("extent_sigmas", format_number(opts.extent_sigmas));
    t.columns = {"n", "trace_J", "trace_Vinv", "excluded_fraction", "band", "relative_change"};
    for (std::size_t k = 0; k < count; ++k) {
      for (const auto& w : reports[k].warnings) t.metadata.emplace_back("warning", "n=" + std::to_string(k) + ": " + w);
      t.rows.push_back({std::to_string(k), format_number(reports[k].J.trace()), format_number(tr_vinv[k]),
                        format_number(reports[k].at_band.excluded_fraction), format_number(c.band),
                        format_number(reports[k].relative_change)});
    }
    emit(to_csv(t), c.out_path, out);
    return kOk;
  }

  std::vector<std::string> notes;
  const FockDensityMatrix rho = load_state(c.src, notes);
  const PhaseSpaceGrid grid = auto_grid(rho, opts);
  const FisherReport f = fisher_matrix(rho, grid, c.band);
  const GaussianMoments m = moments(rho);
  const Eigen::Matrix2d vinv = m.V.inverse();
  const double neg = negative_volume(wigner_from_fock(rho, grid));
  const CramerRaoReport cr = cramer_rao_check(m.V, f.J);
  const double condition = monotonicity_condition(m.V, f.J, Eigen::Matrix2d::Identity());

  json doc;
  doc["band"] = c.band;
  doc["J"] = matrix_json(f.J);
  doc["V"] = matrix_json(m.V);
  doc["Vinv"] = matrix_json(vinv);
  doc["trace_J"] = f.J.trace();
  doc["trace_Vinv"] = vinv.trace();
  doc["relative_change"] = f.relative_change;
  doc["excluded_fraction"] = f.at_band.excluded_fraction;
  doc["neg_volume"] = neg;
  doc["cramer_rao"] = {{"eigenvalues", {cr.eigenvalues(0), cr.eigenvalues(1)}},
                       {"passes", cr.passes},
                       {"applicable", neg < 1e-9}};
  doc["monotonicity_condition"] = condition;
  json warnings = notes;
  for (const auto& w : f.warnings) warnings.push_back(w);
  if (c.debruijn) {
    const Eigen::Matrix2d g = Eigen::Matrix2d::Identity();
    const SlopeReport db = debruijn_check(rho, grid, g);
    const SlopeReport md = measure_derivative_check(rho, grid, g);
    doc["debruijn"] = slope_json(db, 0.02);
    json mdj = slope_json(md, 0.03);
    mdj["condition_sign_consistent"] =
        std::abs(md.extrapolated_slope) <= 1e-3 || (md.extrapolated_slope < 0) == (condition < 0);
    doc["measure_derivative"] = mdj;
    for (const auto& w : db.fisher.warnings) warnings.push_back("debruijn: " + w);
  }
  doc["warnings"] = warnings;
  emit(dump(doc), c.out_path, out);
  return kOk;
}

// channel ---------------------------------------------------------------

struct ChannelCmd {
  StateSource src;
  GridFlags grid;
  double tau = 1.0;
  double n_bar = 0.0;
  std::string engine = "fock";
  double tolerance = kEngineTolerance;
  std::string out_path;
};

int cmd_channel(const ChannelCmd& c, std::ostream& out, std::ostream& err) {
  c.grid.validate();
  const Engine engine = engine_from_string(c.engine);
  require(c.tolerance > 0, ErrorKind::Config, "--tolerance must be positive");
  ThermalLossSpec spec;
  try {
    spec = ThermalLossSpec(c.tau, c.n_bar);
  } catch (const Error& e) {
    fail(ErrorKind::Config, e.what());
  }
  std::vector<std::string> notes;
  const FockDensityMatrix rho = load_state(c.src, notes);
  const GridOptions opts = c.grid.options();

  const MeasureValue before = ngm::ngm(rho, opts);
  json doc;
  doc["tau"] = c.tau;
  doc["nbar"] = c.n_bar;
  doc["engine"] = to_string(engine);
  doc["before"] = measure_json(before);
  json after = json::object();
  json warnings = notes;
  std::optional<MeasureValue> fock_v, ps_v;
  if (engine != Engine::PhaseSpace) {
    KrausReport rep;
    fock_v = measure_after_channel(rho, spec, Engine::Fock, opts, &rep);
    after["fock"] = measure_json(*fock_v);
    doc["kraus"] = {{"l_max", rep.l_max},
                    {"k_max", rep.k_max},
                    {"retained_trace", rep.retained_trace},
                    {"escalated", rep.escalated}};
    for (const auto& w : fock_v->warnings) warnings.push_back("fock: " + w);
  }
  if (engine != Engine::Fock) {
    ps_v = measure_after_channel(rho, spec, Engine::PhaseSpace, opts);
    after["phasespace"] = measure_json(*ps_v);
    for (const auto& w : ps_v->warnings) warnings.push_back("phasespace: " + w);
  }
  doc["after"] = after;
  bool consistent = true;
  if (fock_v && ps_v) {
    const double dre = fock_v->re_mu - ps_v->re_mu;
    const double dim = fock_v->im_mu - ps_v->im_mu;
    consistent = std::abs(dre) < c.tolerance && std::abs(dim) < c.tolerance;
    doc["delta"] = {{"re_mu", dre}, {"im_mu", dim}, {"tolerance", c.tolerance}, {"consistent", consistent}};
  }
  doc["warnings"] = warnings;
  emit(dump(doc), c.out_path, out);
  if (!consistent) {
    err << json{{"error", {{"kind", "inconsistency"},
                           {"message", "Fock and phase-space engines disagree beyond tolerance"}}},
                {"exit_code", kEngineMismatch}}
               .dump()
        << "\n";
    return kEngineMismatch;
  }
  return kOk;
}

// preset ----------------------------------------------------------------

struct PresetCmd {
  bool list = false;
  std::string name;
  std::string out_path;
};

int cmd_preset(const PresetCmd& c, std::ostream& out) {
  if (c.list || c.name.empty()) {
    for (const auto& n : builtin_preset_names()) out << n << "\n";
    return kOk;
  }
  emit(preset_to_json(builtin_preset(c.name)), c.out_path, out);
  return kOk;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  err << json{{"error", {{"kind", kind}, {"message", message}}}, {"exit_code", code}}.dump() << "\n";
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Parse:
      return kConfigError;
    case ErrorKind::Domain:
    case ErrorKind::Capacity:
    case ErrorKind::Shape:
    case ErrorKind::Truncation:
    case ErrorKind::Consistency:
    case ErrorKind::Normalization:
    case ErrorKind::LinearAlgebra:
    case ErrorKind::Grid:
    case ErrorKind::Precondition:
      return kPreconditionError;
  }
  return kPreconditionError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Complex non-Gaussianity measure of truncated Fock states", "ngm"};
  app.require_subcommand(1);
  unsigned workers = 0;
  app.add_option("--workers", workers, "Worker threads (default: NGM_WORKERS or 1)");

  MeasureCmd measure;
  auto* m = app.add_subcommand("measure", "Evaluate mu for one state");
  add_state_flags(m, measure.src);
  add_grid_flags(m, measure.grid);
  m->add_option("--out", measure.out_path, "Also write the JSON result here");

  StateCmd state;
  auto* s = app.add_subcommand("state", "Build a state and print its JSON document");
  add_state_flags(s, state.src);
  add_grid_flags(s, state.grid);
  s->add_option("--out", state.out_path, "Also write the state file here");
  s->add_option("--wigner-csv", state.wigner_csv, "Dump W and its gradient as CSV");
  s->add_option("--wigner-bin", state.wigner_bin, "Dump W and its gradient as a binary file");

  SweepCmd sweep;
  auto* sw = app.add_subcommand("sweep", "Run an experiment preset and emit CSV");
  sw->add_option("--preset", sweep.preset, "Built-in preset name");
  sw->add_option("--preset-file", sweep.preset_file, "Preset JSON document");
  sw->add_option("--engine", sweep.engine, "fock | phasespace | both");
  add_grid_flags(sw, sweep.grid);
  sw->add_option("--cutoff", sweep.cutoff, "Fock cutoff n_c for cat and GKP presets");
  sw->add_option("--seed", sweep.seed, "Base seed for qudit ensembles")->each([&](const std::string&) {
    sweep.seed_set = true;
  });
  sw->add_option("--out", sweep.out_dir, "Directory for <preset>.csv");
  sw->add_option("--save-preset", sweep.save_preset, "Write the resolved preset JSON here");

  FisherCmd fisher;
  auto* f = app.add_subcommand("fisher", "Fisher-information diagnostics");
  add_state_flags(f, fisher.src);
  add_grid_flags(f, fisher.grid);
  f->add_option("--band", fisher.band, "Principal-value band in units of 1/pi");
  f->add_flag("--debruijn", fisher.debruijn, "Add de Bruijn and measure-derivative checks");
  f->add_flag("--fock-sweep", fisher.fock_sweep, "Tabulate Fock states n = 0..--fock-max as CSV");
  f->add_option("--fock-max", fisher.fock_max, "Largest Fock level in the sweep");
  f->add_option("--out", fisher.out_path, "Also write the result here");

  ChannelCmd channel;
  auto* ch = app.add_subcommand("channel", "Apply thermal loss and compare engines");
  add_state_flags(ch, channel.src);
  add_grid_flags(ch, channel.grid);
  ch->add_option("--tau", channel.tau, "Transmissivity in (0, 1]")->required();
  ch->add_option("--nbar", channel.n_bar, "Thermal occupation");
  ch->add_option("--engine", channel.engine, "fock | phasespace | both");
  ch->add_option("--tolerance", channel.tolerance, "Cross-engine tolerance");
  ch->add_option("--out", channel.out_path, "Also write the JSON result here");

  PresetCmd preset;
  auto* pr = app.add_subcommand("preset", "List presets or print one as JSON");
  pr->add_flag("--list", preset.list, "List built-in presets");
  pr->add_option("--name", preset.name, "Preset to print");
  pr->add_option("--out", preset.out_path, "Also write the JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    report_error(err, "config", e.what(), kConfigError);
    return kConfigError;
  }

  try {
    if (workers > 0) set_worker_count(workers);
    if (m->parsed()) return cmd_measure(measure, out);
    if (s->parsed()) return cmd_state(state, out, err);
    if (sw->parsed()) return cmd_sweep(sweep, out);
    if (f->parsed()) return cmd_fisher(fisher, out);
    if (ch->parsed()) return cmd_channel(channel, out, err);
    if (pr->parsed()) return cmd_preset(preset, out);
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    report_error(err, std::string(to_string(e.kind())), e.what(), code);
    return code;
  } catch (const std::filesystem::filesystem_error& e) {
    report_error(err, "config", e.what(), kConfigError);
    return kConfigError;
  }
  return kConfigError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"ngm"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ngm::cli
