#pragma once

#include "ngm/catalog.hpp"
#include "ngm/fock.hpp"
#include "ngm/measure.hpp"
#include "ngm/wigner.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ngm {

// State documents: {"dim": n, "re": [[..]], "im": [[..]]} for a density
// matrix, or flat "re"/"im" arrays for a pure state vector.
std::string state_to_json(const FockDensityMatrix& rho);
std::string state_to_json(const FockVector& psi);
FockDensityMatrix state_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

FockDensityMatrix read_state_file(const std::string& path);
void write_state_file(const std::string& path, const FockDensityMatrix& rho);

std::string measure_to_json(const MeasureValue& v);

// Shortest decimal form that parses back to the same double.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;  // "# key=value" lines
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const CsvTable& table);

CsvTable preset_table(const ExperimentPreset& preset, const PresetResult& result, Engine engine);

// One line per grid point: q, p, w[, dw_dq, dw_dp].
void write_wigner_csv(std::ostream& os, const WignerField& field);

// "NGMW", u32 version, u64 n_q, u64 n_p, f64 q_min q_max p_min p_max,
// u8 gradient flag, then row-major values (and gradients).
void write_wigner_binary(const std::string& path, const WignerField& field);
WignerField read_wigner_binary(const std::string& path);

}  // namespace ngm
