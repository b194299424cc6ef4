#pragma once

#include "ngm/channels.hpp"
#include "ngm/fock.hpp"
#include "ngm/measure.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ngm {

enum class Engine { Fock, PhaseSpace, Both };

std::string to_string(Engine e);
Engine engine_from_string(const std::string& s);

// Thermal-loss sweep attached to a preset; every parameter tuple is run at
// each tau.
struct LossSweep {
  std::vector<double> taus;
  double n_bar = 0.001;
};

// State families a preset can bind to. Tuple layouts:
//   qubit: (r, theta, phi)      logical levels from `levels`
//   cat:   (alpha, parity)      parity 0 = even, 1 = odd
//   gkp:   (delta_db, logical)
//   qudit: (d, index, seed)     levels: first d of `levels`, else 0..d-1
enum class Recipe { Qubit, Cat, Gkp, Qudit };

std::string to_string(Recipe r);
Recipe recipe_from_string(const std::string& s);

struct ExperimentPreset {
  std::string name;
  Recipe recipe = Recipe::Qubit;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> tuples;
  std::vector<int> levels;
  int n_c = 40;
  int t_max = 4;
  std::optional<LossSweep> channel;
  GridOptions grid;
};

ExperimentPreset preset_qubit_hemisphere(std::pair<int, int> levels, const std::vector<double>& r_list,
                                         std::size_t theta_count);
ExperimentPreset preset_cat_family(const std::vector<double>& alphas,
                                   const std::vector<Parity>& parities, int n_c = 40);
// Delta_dB -> Delta = 10^(-Delta_dB / 20).
ExperimentPreset preset_gkp_family(const std::vector<double>& delta_db_list,
                                   const std::vector<int>& logicals, int t_max = 4, int n_c = 60);
ExperimentPreset preset_random_qudits(const std::vector<int>& d_list, std::size_t count,
                                      std::uint64_t seed, std::optional<LossSweep> loss_sweep);

// tau = 1.0, 0.9, ..., 0.1.
std::vector<double> default_tau_sweep();

std::vector<std::string> builtin_preset_names();
// Throws a config error for unknown names.
ExperimentPreset builtin_preset(const std::string& name);

// Checks the tuple layout against the recipe and instantiates every tuple.
void validate_preset(const ExperimentPreset& p);

// Truncation notes (GKP Fock leakage) are appended to `warnings` when given.
FockDensityMatrix instantiate(const ExperimentPreset& p, const std::vector<double>& tuple,
                              std::vector<std::string>* warnings = nullptr);

std::string preset_to_json(const ExperimentPreset& p);
ExperimentPreset preset_from_json(const std::string& text);

struct PresetRow {
  std::vector<double> params;
  double tau = 1.0;
  double n_bar = 0.0;
  Engine engine = Engine::Fock;
  MeasureValue value;
};

struct PresetResult {
  std::vector<std::string> columns;  // params, [tau, nbar,] re_mu, im_mu, neg_volume[, engine]
  std::vector<PresetRow> rows;
  std::vector<std::string> warnings;
};

// Fock-basis headroom for a thermal-loss channel on rho.
FockDensityMatrix pad_for_channel(const FockDensityMatrix& rho, const ThermalLossSpec& spec);

// Wigner function of rho for the phase-space engine: on auto_grid(rho), or on
// a wider grid when the output of one of the listed channels would not decay
// below edge_tolerance inside it (thermal noise spreads the support).
WignerField channel_input(const FockDensityMatrix& rho, const std::vector<ThermalLossSpec>& specs,
                          const GridOptions& options = {});

// Measure of rho after thermal loss on one engine (Fock or PhaseSpace).
// tau = 1 measures rho itself. For the phase-space engine, `input` may carry
// a precomputed channel_input covering spec.
MeasureValue measure_after_channel(const FockDensityMatrix& rho, const ThermalLossSpec& spec,
                                   Engine engine, const GridOptions& grid,
                                   KrausReport* kraus = nullptr, const WignerField* input = nullptr);

// Runs every tuple (and channel point) in deterministic order; tuples are
// distributed over worker_count() threads.
PresetResult run_preset(const ExperimentPreset& p, Engine engine = Engine::Fock);

}  // namespace ngm
