#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>

#include "tadpole/lumped.hpp"
#include "tadpole/notch_fit.hpp"
#include "tadpole/tls.hpp"

// JSON documents emitted by the tools. Every top-level document carries
// `schema_version` and `kind`.

namespace tadpole::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json notch_fit_to_json(const fit::NotchFitResult& r);
fit::NotchFitResult notch_fit_from_json(const json& j);

json calibration_to_json(const lumped::CalibrationResult& r, const lumped::CalibrationDataset& data);

json tls_fit_to_json(const tls::TlsFitResult& r, const tls::TemperatureDataset& data);

json sweep_to_json(const std::vector<fit::SweepRow>& rows);

/// `{"schema_version": 1, "kind": kind}`.
json document(const std::string& kind);

/// Pretty-printed with a trailing newline. Throws IoError.
void write_json(const json& j, const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);

/// Power-sweep table with header
/// power_dbm,n_photon,q_i,q_i_sigma,q_e,q_e_sigma,tan_delta
void write_sweep_csv(const std::vector<fit::SweepRow>& rows, const std::filesystem::path& path);

}  // namespace tadpole::io
