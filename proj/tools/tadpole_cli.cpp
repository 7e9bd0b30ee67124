// tadpole: command-line front end for the resonator toolkit.
//
// Subcommands: design, predict, calibrate, synth, fit, tls-fit, report.
// Exit codes: 0 ok, 1 invalid input, 2 fit did not converge, 3 I/O failure.
// Errors are reported on stderr as a single JSON object.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tadpole/cpw.hpp"
#include "tadpole/datasets.hpp"
#include "tadpole/errors.hpp"
#include "tadpole/lumped.hpp"
#include "tadpole/notch_fit.hpp"
#include "tadpole/results_json.hpp"
#include "tadpole/s21.hpp"
#include "tadpole/svg.hpp"
#include "tadpole/tls.hpp"
#include "tadpole/trace_io.hpp"

namespace fs = std::filesystem;
using namespace tadpole;
using io::json;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kFitFailure = 2, kIoFailure = 3 };

constexpr double kMHz = 1e6;
constexpr double kUm = 1e-6;
constexpr double kUm2 = 1e-12;
constexpr double kFfPerUm2 = 1e-15 / 1e-12;
constexpr double kNH = 1e-9;
constexpr double kPF = 1e-12;
constexpr double kNs = 1e-9;

int verbosity = 0;

void emit_json(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    io::write_json(j, out);
  }
}

void note(const std::string& msg) {
  if (verbosity > 0) std::cerr << "note: " << msg << '\n';
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot open " + p.string() + " for writing");
  return out;
}

// --- design ----------------------------------------------------------------

struct CpwFlags {
  double width_um = 0, gap_um = 0, length_um = 0, eps_r = 11.9;
  std::optional<double> eps_eff;

  void add(CLI::App* app, bool required) {
    auto* w = app->add_option("--width-um", width_um, "CPW centre-conductor width (um)")->check(CLI::PositiveNumber);
    auto* g = app->add_option("--gap-um", gap_um, "CPW gap width (um)")->check(CLI::PositiveNumber);
    auto* l = app->add_option("--length-um", length_um, "CPW strip length (um)")->check(CLI::PositiveNumber);
    if (required) {
      w->required();
      g->required();
      l->required();
    }
    app->add_option("--eps-r", eps_r, "substrate relative permittivity (dimensionless)")->capture_default_str()->check(CLI::Range(1.0, 1e4));
    app->add_option("--eps-eff", eps_eff, "effective permittivity override (dimensionless)")->check(CLI::Range(1.0, 1e4));
  }

  cpw::CpwGeometry geometry() const {
    cpw::CpwGeometry g{width_um * kUm, gap_um * kUm, length_um * kUm, eps_r, eps_eff};
    g.validate();
    return g;
  }
};

struct DesignFlags {
  double target_mhz = 0, c0 = 0;
  CpwFlags cpw;
  std::optional<double> inductance_nh, c_cpw_pf;
  std::string out;
};

void run_design(const DesignFlags& f) {
  const auto geom = f.cpw.geometry();
  const auto line = cpw::line_params(geom);
  const auto strip = cpw::strip_lc(geom);
  const double l = f.inductance_nh ? *f.inductance_nh * kNH : strip.inductance;
  const double c_cpw = f.c_cpw_pf ? *f.c_cpw_pf * kPF : strip.capacitance;
  const double target = f.target_mhz * kMHz;
  const double c0 = f.c0 * kFfPerUm2;
  const double area = lumped::required_area(target, l, c0, c_cpw);
  const lumped::LumpedModel m{l, c0 * area, c_cpw};
  const double l_tot = geom.length + std::sqrt(area);
  const double eps_eff = geom.effective_permittivity();

  json j = io::document("design");
  j["inputs"] = {{"target_frequency_mhz", f.target_mhz},
                 {"c0_ff_per_um2", f.c0},
                 {"width_um", f.cpw.width_um},
                 {"gap_um", f.cpw.gap_um},
                 {"length_um", f.cpw.length_um},
                 {"eps_r", f.cpw.eps_r},
                 {"eps_eff", eps_eff}};
  j["line"] = {{"capacitance_pf_per_m", line.capacitance_per_length / kPF},
               {"inductance_nh_per_m", line.inductance_per_length / kNH},
               {"impedance_ohm", line.impedance},
               {"phase_velocity_m_per_s", line.phase_velocity}};
  j["area_um2"] = area / kUm2;
  j["side_um"] = std::sqrt(area) / kUm;
  j["inductance_nh"] = l / kNH;
  j["inductance_source"] = f.inductance_nh ? "override" : "analytic strip";
  j["c_ppc_pf"] = m.capacitance_ppc / kPF;
  j["c_cpw_pf"] = c_cpw / kPF;
  j["c_cpw_source"] = f.c_cpw_pf ? "override" : "analytic strip";
  j["c_total_pf"] = m.total_capacitance() / kPF;
  j["f_check_mhz"] = lumped::resonance_frequency(m) / kMHz;
  j["z_c_ohm"] = lumped::characteristic_impedance(m);
  j["total_length_um"] = l_tot / kUm;
  j["size_ratio"] = cpw::size_ratio(l_tot, cpw::mode_wavelength(target, eps_eff));
  j["is_tadpole"] = m.is_tadpole();
  json notes = json::array();
  if (!f.inductance_nh) {
    notes.push_back("inductance from the conformal-mapping strip formula (" + io::format_double(strip.inductance / kNH) +
                    " nH); fabricated strips of this kind have resonated as if L were ~25% larger "
                    "(coupler and lead contributions are not modelled); pass --inductance-nh to override");
  }
  notes.push_back("square PPC assumed for the total length");
  j["notes"] = notes;
  emit_json(j, f.out);
}

// --- predict ---------------------------------------------------------------

struct PredictFlags {
  std::string designs, out, json_out;
  double c0 = 0, inductance_nh = 0, c_cpw_pf = 0, length_um = 0, eps_eff = 6.45;
};

void run_predict(const PredictFlags& f) {
  const auto rows = io::designs_from_table(io::read_csv_table(fs::path(f.designs)));
  if (rows.empty()) throw ParseError(f.designs, 0, "no design rows");
  std::vector<lumped::DesignPoint> points;
  for (const auto& r : rows) {
    if (!(r.area > 0.0)) throw DomainError("design '" + r.label + "': area must be positive");
    points.push_back({r.label,
                      {f.inductance_nh * kNH, f.c0 * kFfPerUm2 * r.area, f.c_cpw_pf * kPF},
                      f.length_um * kUm + std::sqrt(r.area),
                      r.measured_frequency});
  }
  const auto report = lumped::prediction_report(points, f.eps_eff);

  std::ostringstream csv;
  csv << "label,area_um2,f_pred_mhz,f_meas_mhz,rel_error_pct,z_c_ohm,size_ratio\n";
  json arr = json::array();
  for (std::size_t i = 0; i < report.size(); ++i) {
    const auto& r = report[i];
    const auto opt = [](const std::optional<double>& v, double scale) {
      return v ? io::format_double(*v * scale) : std::string();
    };
    csv << r.label << ',' << io::format_double(rows[i].area / kUm2) << ','
        << io::format_double(r.predicted_frequency / kMHz) << ',' << opt(r.measured_frequency, 1.0 / kMHz) << ','
        << opt(r.relative_error_percent, 1.0) << ',' << io::format_double(r.impedance) << ','
        << io::format_double(r.size_ratio) << '\n';
    arr.push_back({{"label", r.label},
                   {"area_um2", rows[i].area / kUm2},
                   {"f_pred_mhz", r.predicted_frequency / kMHz},
                   {"f_meas_mhz", r.measured_frequency ? json(*r.measured_frequency / kMHz) : json(nullptr)},
                   {"rel_error_pct", r.relative_error_percent ? json(*r.relative_error_percent) : json(nullptr)},
                   {"z_c_ohm", r.impedance},
                   {"size_ratio", r.size_ratio},
                   {"size_ratio_frequency", r.size_ratio_uses_measured ? "measured" : "predicted"}});
  }
  if (f.out.empty() || f.out == "-") {
    std::cout << csv.str();
  } else {
    auto out = open_out(f.out);
    out << csv.str();
  }
  if (!f.json_out.empty()) {
    json j = io::document("prediction");
    j["conventions"] = {{"relative_error", "100 (f_meas - f_pred) / f_meas"},
                        {"size_ratio", "(l_strip + sqrt(A)) / (c / (f sqrt(eps_eff))), f measured when available"}};
    j["inputs"] = {{"c0_ff_per_um2", f.c0}, {"inductance_nh", f.inductance_nh}, {"c_cpw_pf", f.c_cpw_pf},
                   {"length_um", f.length_um}, {"eps_eff", f.eps_eff}};
    j["rows"] = arr;
    io::write_json(j, f.json_out);
  }
}

// --- calibrate -------------------------------------------------------------

struct CalibrateFlags {
  std::string data, out;
  double inductance_nh = 0, c_cpw_pf = 0;
};

void run_calibrate(const CalibrateFlags& f) {
  const auto data = io::read_calibration_csv(f.data);
  const auto r = lumped::calibrate_c0(data, f.inductance_nh * kNH, f.c_cpw_pf * kPF);
  emit_json(io::calibration_to_json(r, data), f.out);
}

// --- synth -----------------------------------------------------------------

struct SynthFlags {
  std::vector<double> f_r_mhz, q_loaded, q_ext, phi;
  double amplitude = 1.0, alpha = 0.0, delay_ns = 0.0;
  double linewidths = 5.0;
  std::optional<double> start_mhz, stop_mhz;
  std::size_t points = 2001;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  std::optional<double> power_dbm, temperature_k;
  std::string label, out;
};

void run_synth(const SynthFlags& f) {
  const std::size_t n = f.f_r_mhz.size();
  auto pick = [&](const std::vector<double>& v, std::size_t k, const char* name) {
    if (v.size() != 1 && v.size() != n) {
      throw DomainError(std::string("--") + name + " needs 1 or " + std::to_string(n) + " values");
    }
    return v.size() == 1 ? v[0] : v[k];
  };
  std::vector<s21::NotchParams> params;
  for (std::size_t k = 0; k < n; ++k) {
    s21::NotchParams p{f.f_r_mhz[k] * kMHz, pick(f.q_loaded, k, "q-loaded"), pick(f.q_ext, k, "q-ext"),
                       pick(f.phi, k, "phi-rad"), f.amplitude, f.alpha, f.delay_ns * kNs};
    p.validate();
    params.push_back(p);
  }
  std::vector<double> grid;
  if (f.start_mhz || f.stop_mhz) {
    if (!f.start_mhz || !f.stop_mhz) throw DomainError("--start-mhz and --stop-mhz go together");
    grid = s21::linear_grid(*f.start_mhz * kMHz, *f.stop_mhz * kMHz, f.points);
  } else if (n == 1) {
    grid = s21::linewidth_grid(params[0], f.linewidths, f.points);
  } else {
    throw DomainError("multiplexed synthesis needs --start-mhz and --stop-mhz");
  }
  FrequencyTrace t = n == 1 ? s21::synthesize_trace(params[0], grid, 0.0, f.seed)
                            : s21::compose_multiplexed(params, grid);
  s21::add_noise(t, f.noise_sigma, f.seed);
  t.label = f.label;
  t.power_dbm = f.power_dbm;
  t.temperature_k = f.temperature_k;
  if (f.out.empty() || f.out == "-") {
    io::write_trace_csv(t, std::cout);
  } else {
    io::write_trace(t, f.out);
  }
}

// --- fit -------------------------------------------------------------------

struct FitFlags {
  std::vector<std::string> inputs;
  std::vector<double> resonances_mhz;
  std::optional<double> delay_ns;
  bool no_refine = false;
  std::string format = "auto";
  std::string out, sweep_csv;
};

void run_fit(const FitFlags& f) {
  const auto format = f.format == "csv"          ? io::TraceFormat::Csv
                      : f.format == "touchstone" ? io::TraceFormat::Touchstone
                                                 : io::TraceFormat::Auto;
  std::vector<FrequencyTrace> traces;
  for (const auto& path : f.inputs) {
    auto t = io::read_trace(path, format);
    if (t.label.empty()) t.label = fs::path(path).stem().string();
    if (f.resonances_mhz.empty()) {
      traces.push_back(std::move(t));
      continue;
    }
    std::vector<double> centres;
    for (double m : f.resonances_mhz) centres.push_back(m * kMHz);
    for (auto& w : fit::split_multiplexed(t, centres)) traces.push_back(std::move(w));
  }
  fit::ExtractOptions opt;
  if (f.delay_ns) opt.delay_hint = *f.delay_ns * kNs;
  opt.refine = !f.no_refine;

  const auto fits = fit::omp::extract_batch(traces, opt);
  for (const auto& r : fits) {
    for (const auto& w : r.warnings) note(r.label + ": " + w);
  }
  if (fits.size() == 1) {
    emit_json(io::notch_fit_to_json(fits.front()), f.out);
  } else {
    json j = io::document("notch_fit_batch");
    json arr = json::array();
    for (const auto& r : fits) arr.push_back(io::notch_fit_to_json(r));
    j["fits"] = arr;
    emit_json(j, f.out);
  }
  if (!f.sweep_csv.empty()) io::write_sweep_csv(fit::analyze_power_sweep(traces, opt), f.sweep_csv);
}

// --- tls-fit ---------------------------------------------------------------

struct TlsFlags {
  std::string data, out;
  double filling_factor = 1.0;
  bool unweighted = false;
};

void run_tls(const TlsFlags& f) {
  const auto data = io::read_temperature_csv(f.data);
  tls::TlsFitOptions opt;
  opt.filling_factor = f.filling_factor;
  opt.use_weights = !f.unweighted;
  emit_json(io::tls_fit_to_json(tls::fit_tls(data, opt), data), f.out);
}

// --- report ----------------------------------------------------------------

struct ReportFlags {
  std::vector<std::string> fits;
  std::string calibration, tls, out_dir;
};

std::vector<fit::NotchFitResult> load_fits(const std::string& path) {
  const auto j = io::read_json(path);
  const auto kind = j.value("kind", std::string());
  std::vector<fit::NotchFitResult> out;
  if (kind == "notch_fit") {
    out.push_back(io::notch_fit_from_json(j));
  } else if (kind == "notch_fit_batch") {
    for (const auto& item : j.at("fits")) out.push_back(io::notch_fit_from_json(item));
  } else {
    throw IoError(path + ": expected a notch_fit or notch_fit_batch document, got '" + kind + "'");
  }
  return out;
}

void write_text(const fs::path& p, const std::string& text) {
  auto out = open_out(p);
  out << text;
  if (!out) throw IoError("write failed: " + p.string());
}

void run_report(const ReportFlags& f) {
  if (f.fits.empty()) throw IoError("report: no fit files given");
  std::vector<fit::NotchFitResult> fits;
  for (const auto& p : f.fits) {
    auto more = load_fits(p);
    fits.insert(fits.end(), more.begin(), more.end());
  }
  if (fits.empty()) throw IoError("report: fit files contain no results");
  fs::create_directories(f.out_dir);
  const fs::path dir(f.out_dir);
  json written = json::array();

  std::ostringstream csv;
  csv << "label,power_dbm,temperature_k,f_r_hz,f_r_sigma_hz,q_loaded,q_loaded_sigma,q_ext_abs,"
         "q_ext_abs_sigma,q_internal,q_internal_sigma,phi_rad,tan_delta,n_photon\n";
  const auto opt = [](const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); };
  for (const auto& r : fits) {
    const auto& p = r.params;
    csv << r.label << ',' << opt(r.power_dbm) << ',' << opt(r.temperature_k) << ',' << io::format_double(p.f_r) << ','
        << io::format_double(r.sigma.f_r) << ',' << io::format_double(p.q_loaded) << ','
        << io::format_double(r.sigma.q_loaded) << ',' << io::format_double(p.q_ext_abs) << ','
        << io::format_double(r.sigma.q_ext_abs) << ',' << io::format_double(r.q_internal) << ','
        << io::format_double(r.sigma.q_internal) << ',' << io::format_double(p.phi) << ','
        << io::format_double(r.loss_tangent) << ','
        << (r.photons ? io::format_double(r.photons->mean_photons) : std::string()) << '\n';
  }
  write_text(dir / "fits.csv", csv.str());
  written.push_back((dir / "fits.csv").string());

  // Q_i against probe power, one series per label.
  std::map<std::string, svg::Series> by_label;
  for (const auto& r : fits) {
    if (!r.power_dbm) continue;
    auto& s = by_label[r.label];
    s.name = r.label;
    s.x.push_back(*r.power_dbm);
    s.y.push_back(r.q_internal);
    s.y_error.push_back(r.sigma.q_internal);
  }
  if (!by_label.empty()) {
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
    svg::Plot plot{"Internal quality factor vs probe power", "P_in (dBm)", "Q_i", {}};
    std::size_t k = 0;
    for (auto& [label, s] : by_label) {
      s.color = palette[k++ % 6];
      plot.series.push_back(s);
    }
    write_text(dir / "qi_vs_power.svg", svg::render(plot));
    written.push_back((dir / "qi_vs_power.svg").string());
  }

  if (!f.calibration.empty()) {
    const auto j = io::read_json(f.calibration);
    if (j.value("kind", std::string()) != "calibration") throw IoError(f.calibration + ": not a calibration document");
    const double l = j.at("inductance_nh").get<double>() * kNH;
    const double c_cpw = j.at("c_cpw_pf").get<double>() * kPF;
    const double c0 = j.at("c0_ff_per_um2").get<double>() * kFfPerUm2;
    svg::Series meas{"measured", {}, {}, {}, false};
    double a_lo = 1e300, a_hi = 0.0;
    for (const auto& row : j.at("rows")) {
      const double a = row.at("area_um2").get<double>();
      meas.x.push_back(a);
      meas.y.push_back(row.at("f_meas_mhz").get<double>());
      a_lo = std::min(a_lo, a);
      a_hi = std::max(a_hi, a);
    }
    svg::Series model{"lumped model", {}, {}, {}, true, "#d62728"};
    for (int i = 0; i <= 100; ++i) {
      const double a = a_lo * std::pow(a_hi / a_lo, i / 100.0);
      model.x.push_back(a);
      model.y.push_back(lumped::resonance_frequency({l, c0 * a * kUm2, c_cpw}) / kMHz);
    }
    svg::Plot plot{"Resonance frequency vs PPC area", "A_PPC (um^2)", "f_r (MHz)", {meas, model}};
    write_text(dir / "fr_vs_area.svg", svg::render(plot));
    written.push_back((dir / "fr_vs_area.svg").string());
  }

  if (!f.tls.empty()) {
    const auto j = io::read_json(f.tls);
    if (j.value("kind", std::string()) != "tls_fit") throw IoError(f.tls + ": not a tls_fit document");
    const double f0 = j.at("f0_hz").get<double>();
    svg::Series data{"measured", {}, {}, {}, false};
    svg::Series model{"TLS model", {}, {}, {}, true, "#d62728"};
    for (const auto& row : j.at("rows")) {
      const double t = row.at("temperature_k").get<double>() * 1e3;
      data.x.push_back(t);
      data.y.push_back((row.at("f_r_hz").get<double>() - f0) / 1e3);
      if (!row.at("sigma_f_hz").is_null()) data.y_error.push_back(row.at("sigma_f_hz").get<double>() / 1e3);
      model.x.push_back(t);
      model.y.push_back((row.at("f_model_hz").get<double>() - f0) / 1e3);
    }
    if (data.y_error.size() != data.x.size()) data.y_error.clear();
    svg::Plot plot{"Resonance frequency vs temperature", "T (mK)", "f_r - f0 (kHz)", {data, model}};
    write_text(dir / "fr_vs_temperature.svg", svg::render(plot));
    written.push_back((dir / "fr_vs_temperature.svg").string());
  }

  json summary = io::document("report");
  summary["fit_count"] = fits.size();
  summary["files"] = written;
  std::cout << summary.dump(2) << '\n';
}

// --- errors ----------------------------------------------------------------

int fail(ExitCode code, const std::string& kind, const std::string& message, const std::string& stage = {}) {
  json j = {{"error", kind}, {"exit_code", static_cast<int>(code)}, {"message", message}};
  if (!stage.empty()) j["stage"] = stage;
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tadpole: design and characterisation of lumped-element (tadpole) resonators"};
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", verbosity, "print fit warnings and notes to stderr");
  std::function<void()> action;

  DesignFlags design;
  auto* d = app.add_subcommand("design", "PPC area and figures of merit for a target frequency");
  d->add_option("--target-frequency-mhz", design.target_mhz, "target resonance frequency (MHz)")->required()->check(CLI::PositiveNumber);
  d->add_option("--c0-ff-per-um2", design.c0, "PPC capacitance per area (fF/um^2)")->required()->check(CLI::PositiveNumber);
  design.cpw.add(d, true);
  d->add_option("--inductance-nh", design.inductance_nh, "total inductance override (nH)")->check(CLI::PositiveNumber);
  d->add_option("--c-cpw-pf", design.c_cpw_pf, "strip capacitance override (pF)")->check(CLI::NonNegativeNumber);
  d->add_option("-o,--output", design.out, "output JSON path (default: stdout)");
  d->callback([&] { action = [&] { run_design(design); }; });

  PredictFlags predict;
  auto* p = app.add_subcommand("predict", "predicted frequency, Z_c and size ratio for a design table");
  p->add_option("--designs", predict.designs, "CSV with label,area_um2[,f_meas_mhz]")->required();
  p->add_option("--c0-ff-per-um2", predict.c0, "PPC capacitance per area (fF/um^2)")->required()->check(CLI::PositiveNumber);
  p->add_option("--inductance-nh", predict.inductance_nh, "total inductance (nH)")->required()->check(CLI::PositiveNumber);
  p->add_option("--c-cpw-pf", predict.c_cpw_pf, "strip capacitance (pF)")->required()->check(CLI::PositiveNumber);
  p->add_option("--length-um", predict.length_um, "CPW strip length (um)")->required()->check(CLI::PositiveNumber);
  p->add_option("--eps-eff", predict.eps_eff, "effective permittivity for l_tot/lambda0 (dimensionless)")->capture_default_str()->check(CLI::Range(1.0, 1e4));
  p->add_option("-o,--output", predict.out, "output CSV path (default: stdout)");
  p->add_option("--json", predict.json_out, "also write a JSON report here");
  p->callback([&] { action = [&] { run_predict(predict); }; });

  CalibrateFlags cal;
  auto* c = app.add_subcommand("calibrate", "fit c0 to (area, measured frequency) rows");
  c->add_option("--data", cal.data, "CSV with label,area_um2,f_meas_mhz")->required();
  c->add_option("--inductance-nh", cal.inductance_nh, "total inductance, held fixed (nH)")->required()->check(CLI::PositiveNumber);
  c->add_option("--c-cpw-pf", cal.c_cpw_pf, "strip capacitance, held fixed (pF)")->required()->check(CLI::PositiveNumber);
  c->add_option("-o,--output", cal.out, "output JSON path (default: stdout)");
  c->callback([&] { action = [&] { run_calibrate(cal); }; });

  SynthFlags synth;
  auto* s = app.add_subcommand("synth", "synthesise a notch S21 trace (one or several resonators)");
  s->add_option("--f-r-mhz", synth.f_r_mhz, "resonance frequency; several for a multiplexed trace (MHz)")->required()->delimiter(',')->check(CLI::PositiveNumber);
  s->add_option("--q-loaded", synth.q_loaded, "loaded quality factor Q_L (dimensionless; one or per resonator)")->required()->delimiter(',')->check(CLI::PositiveNumber);
  s->add_option("--q-ext", synth.q_ext, "|Q_e| (dimensionless; one or per resonator)")->required()->delimiter(',')->check(CLI::PositiveNumber);
  synth.phi = {0.0};
  s->add_option("--phi-rad", synth.phi, "impedance-mismatch angle (rad; one or per resonator)")->capture_default_str()->delimiter(',');
  s->add_option("--amplitude", synth.amplitude, "environment amplitude a (dimensionless)")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--alpha-rad", synth.alpha, "environment phase alpha (rad)")->capture_default_str();
  s->add_option("--delay-ns", synth.delay_ns, "cable delay tau (ns)")->capture_default_str();
  s->add_option("--linewidths", synth.linewidths, "half-span in linewidths f_r/Q_L (single resonator)")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--start-mhz", synth.start_mhz, "grid start (MHz)")->check(CLI::PositiveNumber);
  s->add_option("--stop-mhz", synth.stop_mhz, "grid stop (MHz)")->check(CLI::PositiveNumber);
  s->add_option("--points", synth.points, "number of grid points")->capture_default_str()->check(CLI::Range(std::size_t{5}, std::size_t{100000000}));
  s->add_option("--noise-sigma", synth.noise_sigma, "Gaussian noise per quadrature (dimensionless, S21 units)")->capture_default_str()->check(CLI::NonNegativeNumber);
  s->add_option("--seed", synth.seed, "noise seed (64-bit integer)")->capture_default_str();
  s->add_option("--power-dbm", synth.power_dbm, "probe power metadata (dBm)");
  s->add_option("--temperature-k", synth.temperature_k, "temperature metadata (K)")->check(CLI::PositiveNumber);
  s->add_option("--label", synth.label, "trace label");
  s->add_option("-o,--output", synth.out, "output CSV path (default: stdout)");
  s->callback([&] { action = [&] { run_synth(synth); }; });

  FitFlags fitf;
  auto* ft = app.add_subcommand("fit", "extract notch parameters from one or more traces");
  ft->add_option("inputs", fitf.inputs, "trace files (.csv, .s1p, .s2p)")->required();
  ft->add_option("--resonances-mhz", fitf.resonances_mhz, "approximate resonance frequencies for windowing (MHz)")->delimiter(',')->check(CLI::PositiveNumber);
  ft->add_option("--delay-ns", fitf.delay_ns, "cable delay hint (ns)");
  ft->add_flag("--no-refine", fitf.no_refine, "skip the joint seven-parameter refinement");
  ft->add_option("--format", fitf.format, "input format")->capture_default_str()->check(CLI::IsMember({"auto", "csv", "touchstone"}));
  ft->add_option("-o,--output", fitf.out, "output JSON path (default: stdout)");
  ft->add_option("--sweep-csv", fitf.sweep_csv, "also write the power-sweep table (needs power metadata)");
  ft->callback([&] { action = [&] { run_fit(fitf); }; });

  TlsFlags tlsf;
  auto* t = app.add_subcommand("tls-fit", "fit f0 and delta0 to resonance frequency vs temperature");
  t->add_option("--data", tlsf.data, "CSV with temperature_k,f_r_hz[,sigma_f_hz]")->required();
  t->add_option("--filling-factor", tlsf.filling_factor, "TLS filling factor F, held fixed (dimensionless)")->capture_default_str()->check(CLI::Range(1e-12, 1.0));
  t->add_flag("--unweighted", tlsf.unweighted, "ignore the sigma_f_hz column");
  t->add_option("-o,--output", tlsf.out, "output JSON path (default: stdout)");
  t->callback([&] { action = [&] { run_tls(tlsf); }; });

  ReportFlags rep;
  auto* r = app.add_subcommand("report", "tables and SVG plots from fit results");
  r->add_option("--fits", rep.fits, "notch_fit or notch_fit_batch JSON files");
  r->add_option("--calibration", rep.calibration, "calibration JSON for the frequency-vs-area plot");
  r->add_option("--tls", rep.tls, "tls_fit JSON for the frequency-vs-temperature plot");
  r->add_option("--out-dir", rep.out_dir, "output directory")->required();
  r->callback([&] { action = [&] { run_report(rep); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kValidation, "validation", e.what());
  }

  try {
    action();
  } catch (const FitError& e) {
    return fail(kFitFailure, "fit", e.what(), e.stage());
  } catch (const IoError& e) {
    return fail(kIoFailure, "io", e.what());
  } catch (const DomainError& e) {
    return fail(kValidation, "validation", e.what());
  } catch (const std::exception& e) {
    return fail(kIoFailure, "io", e.what());
  }
  return kOk;
}
