#include "tadpole/results_json.hpp"

#include <fstream>

#include "tadpole/errors.hpp"
#include "tadpole/trace_io.hpp"

namespace tadpole::io {

namespace {

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

json document(const std::string& kind) {
  return json{{"schema_version", kSchemaVersion}, {"kind", kind}};
}

json notch_fit_to_json(const fit::NotchFitResult& r) {
  json j = document("notch_fit");
  j["label"] = r.label;
  j["power_dbm"] = optional_json(r.power_dbm);
  j["temperature_k"] = optional_json(r.temperature_k);
  const auto& p = r.params;
  j["params"] = {{"f_r_hz", p.f_r},         {"q_loaded", p.q_loaded}, {"q_ext_abs", p.q_ext_abs},
                 {"phi_rad", p.phi},        {"amplitude", p.amplitude}, {"alpha_rad", p.alpha},
                 {"delay_s", p.delay}};
  j["q_internal"] = r.q_internal;
  j["loss_tangent"] = r.loss_tangent;
  const auto& s = r.sigma;
  j["sigma"] = {{"f_r_hz", s.f_r},           {"q_loaded", s.q_loaded}, {"q_ext_abs", s.q_ext_abs},
                {"q_internal", s.q_internal}, {"phi_rad", s.phi},       {"delay_s", s.delay}};
  if (r.photons) {
    j["photons"] = {{"input_power_w", r.photons->input_power},
                    {"mean_photons", r.photons->mean_photons},
                    {"single_photon_power_w", r.photons->single_photon_power},
                    {"single_photon_power_dbm", watts_to_dbm(r.photons->single_photon_power)}};
  } else {
    j["photons"] = nullptr;
  }
  j["conventions"] = {{"q_internal", fit::kQiConvention},
                      {"uncertainty", r.refined ? fit::kUncertaintyModel : fit::kGeometricUncertaintyModel},
                      {"model", "S21 = a e^{i alpha} e^{-2 pi i f tau} [1 - (QL/|Qe|) e^{i phi} / (1 + 2i QL (f/fr - 1))]"}};
  j["diagnostics"] = {
      {"circle", {{"center_re", r.circle.center.real()},
                  {"center_im", r.circle.center.imag()},
                  {"radius", r.circle.radius},
                  {"rms_residual", r.circle.rms_residual}}},
      {"residual_rms", r.residual_rms},
      {"phase_rms_rad", r.phase_rms},
      {"phase_iterations", r.phase_iterations},
      {"grid_search_fallback", r.grid_search_fallback},
      {"refined", r.refined},
      {"refine_iterations", r.refine_iterations},
      {"point_count", r.point_count},
      {"averaged_count", r.averaged_count},
      {"warnings", r.warnings}};
  return j;
}

fit::NotchFitResult notch_fit_from_json(const json& j) {
  try {
    if (j.at("kind").get<std::string>() != "notch_fit") throw IoError("not a notch_fit document");
    fit::NotchFitResult r;
    r.label = j.at("label").get<std::string>();
    r.power_dbm = optional_from<double>(j, "power_dbm");
    r.temperature_k = optional_from<double>(j, "temperature_k");
    const auto& p = j.at("params");
    r.params = {p.at("f_r_hz").get<double>(),    p.at("q_loaded").get<double>(),
                p.at("q_ext_abs").get<double>(), p.at("phi_rad").get<double>(),
                p.at("amplitude").get<double>(), p.at("alpha_rad").get<double>(),
                p.at("delay_s").get<double>()};
    r.q_internal = j.at("q_internal").get<double>();
    r.loss_tangent = j.at("loss_tangent").get<double>();
    const auto& s = j.at("sigma");
    r.sigma = {s.at("f_r_hz").get<double>(),     s.at("q_loaded").get<double>(),
               s.at("q_ext_abs").get<double>(),  s.at("q_internal").get<double>(),
               s.at("phi_rad").get<double>(),    s.at("delay_s").get<double>()};
    if (!j.at("photons").is_null()) {
      const auto& ph = j.at("photons");
      r.photons = fit::PhotonMetrics{ph.at("input_power_w").get<double>(), ph.at("mean_photons").get<double>(),
                                     ph.at("single_photon_power_w").get<double>()};
    }
    const auto& d = j.at("diagnostics");
    const auto& c = d.at("circle");
    r.circle = {{c.at("center_re").get<double>(), c.at("center_im").get<double>()},
                c.at("radius").get<double>(),
                c.at("rms_residual").get<double>()};
    r.residual_rms = d.at("residual_rms").get<double>();
    r.phase_rms = d.at("phase_rms_rad").get<double>();
    r.phase_iterations = d.at("phase_iterations").get<int>();
    r.grid_search_fallback = d.at("grid_search_fallback").get<bool>();
    r.refined = d.at("refined").get<bool>();
    r.refine_iterations = d.at("refine_iterations").get<int>();
    r.point_count = d.at("point_count").get<std::size_t>();
    r.averaged_count = d.at("averaged_count").get<std::size_t>();
    r.warnings = d.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed notch_fit document: ") + e.what());
  }
}

json calibration_to_json(const lumped::CalibrationResult& r, const lumped::CalibrationDataset& data) {
  json j = document("calibration");
  j["c0_ff_per_um2"] = r.capacitance_per_area * 1e3;
  j["c0_sigma_ff_per_um2"] = r.capacitance_per_area_sigma * 1e3;
  j["inductance_nh"] = r.inductance * 1e9;
  j["c_cpw_pf"] = r.capacitance_cpw * 1e12;
  j["line_fit"] = {{"slope_ff_per_um2", r.line_slope * 1e3},
                   {"slope_sigma_ff_per_um2", r.line_slope_sigma * 1e3},
                   {"intercept_pf", r.line_intercept * 1e12},
                   {"intercept_sigma_pf", r.line_intercept_sigma * 1e12},
                   {"r_squared", r.line_r_squared}};
  json rows = json::array();
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const auto& row = data.rows[i];
    rows.push_back({{"label", row.label},
                    {"area_um2", row.area * 1e12},
                    {"f_meas_mhz", row.frequency * 1e-6},
                    {"c_total_pf", 1e12 * lumped::implied_capacitance(row.frequency, r.inductance)},
                    {"c_residual_pf", r.capacitance_residuals[i] * 1e12},
                    {"f_relative_residual", r.frequency_residuals[i]}});
  }
  j["rows"] = rows;
  j["conventions"] = {{"fit", "C_total = 1/((2 pi f)^2 L) regressed on area with intercept fixed at C_cpw"},
                      {"degeneracy", "frequency-vs-area data identifies only L*c0 and L*C_cpw"}};
  return j;
}

json tls_fit_to_json(const tls::TlsFitResult& r, const tls::TemperatureDataset& data) {
  json j = document("tls_fit");
  j["f0_hz"] = r.params.f0;
  j["f0_sigma_hz"] = r.f0_sigma;
  j["delta0"] = r.params.delta0;
  j["delta0_sigma"] = r.delta0_sigma;
  j["filling_factor"] = r.params.filling_factor;
  j["chi_square"] = r.chi_square;
  j["weighted"] = r.weighted;
  j["iterations"] = r.iterations;
  json rows = json::array();
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    const auto& p = data.points[i];
    rows.push_back({{"temperature_k", p.temperature},
                    {"f_r_hz", p.frequency},
                    {"sigma_f_hz", optional_json(p.sigma)},
                    {"f_model_hz", p.frequency - r.residuals[i]},
                    {"residual_hz", r.residuals[i]}});
  }
  j["rows"] = rows;
  j["conventions"] = {
      {"model", "f(T) = f0 [1 + (F delta0/pi) (Re Psi(1/2 + h f0/(2 pi i kB T)) - ln(h f0/(kB T)))]"},
      {"log_argument", "f0 (explicit model)"},
      {"covariance", "scaled by reduced chi-square"}};
  return j;
}

json sweep_to_json(const std::vector<fit::SweepRow>& rows) {
  json j = document("power_sweep");
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"power_dbm", r.power_dbm}, {"n_photon", r.n_photon}, {"q_i", r.q_i},
                   {"q_i_sigma", r.q_i_sigma}, {"q_e", r.q_e},           {"q_e_sigma", r.q_e_sigma},
                   {"tan_delta", r.tan_delta}, {"trace_count", r.trace_count}});
  }
  j["rows"] = arr;
  return j;
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_sweep_csv(const std::vector<fit::SweepRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "power_dbm,n_photon,q_i,q_i_sigma,q_e,q_e_sigma,tan_delta\n";
  for (const auto& r : rows) {
    out << format_double(r.power_dbm) << ',' << format_double(r.n_photon) << ',' << format_double(r.q_i)
        << ',' << format_double(r.q_i_sigma) << ',' << format_double(r.q_e) << ','
        << format_double(r.q_e_sigma) << ',' << format_double(r.tan_delta) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace tadpole::io
