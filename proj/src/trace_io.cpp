#include "tadpole/trace_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "csv_util.hpp"
#include "tadpole/constants.hpp"
#include "tadpole/errors.hpp"

namespace tadpole::io {

using detail::parse_double;
using detail::split;
using detail::split_ws;
using detail::trim;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Row-level checks shared by both readers; `line` is the source line of the sample.
void append_sample(FrequencyTrace& t, double f, complex z, const std::string& source,
                   std::size_t line) {
  if (!std::isfinite(f)) throw ParseError(source, line, "non-finite frequency");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw ParseError(source, line, "non-finite sample");
  }
  if (!t.frequency.empty() && !(f > t.frequency.back())) {
    throw ParseError(source, line, "frequency grid not strictly increasing");
  }
  t.frequency.push_back(f);
  t.s21.push_back(z);
}

void finish(FrequencyTrace& t, const std::string& source) {
  if (t.size() < kMinTracePoints) {
    throw ParseError(source, 0,
                     "trace has " + std::to_string(t.size()) + " points, at least " +
                         std::to_string(kMinTracePoints) + " required");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

FrequencyTrace read_trace_csv(std::istream& in, const std::string& source) {
  FrequencyTrace t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      if (have_header) continue;
      const auto body = trim(s.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const std::string key(trim(body.substr(0, eq)));
      const std::string value(trim(body.substr(eq + 1)));
      if (key == "label") {
        t.label = value;
      } else if (key == "power_dbm" || key == "temperature_k") {
        const auto v = parse_double(value);
        if (!v || !std::isfinite(*v)) throw ParseError(source, lineno, "bad value for " + key);
        (key == "power_dbm" ? t.power_dbm : t.temperature_k) = *v;
      } else {
        t.attributes[key] = value;
      }
      continue;
    }
    const auto cols = split(s, ',');
    if (!have_header) {
      if (cols.size() != 3 || cols[0] != "freq_hz" || cols[1] != "re" || cols[2] != "im") {
        throw ParseError(source, lineno, "expected header 'freq_hz,re,im'");
      }
      have_header = true;
      continue;
    }
    if (cols.size() != 3) throw ParseError(source, lineno, "expected 3 columns");
    const auto f = parse_double(cols[0]);
    const auto re = parse_double(cols[1]);
    const auto im = parse_double(cols[2]);
    if (!f || !re || !im) throw ParseError(source, lineno, "unparsable number");
    append_sample(t, *f, {*re, *im}, source, lineno);
  }
  if (!have_header) throw ParseError(source, 0, "missing header 'freq_hz,re,im'");
  finish(t, source);
  if (t.temperature_k && !(*t.temperature_k > 0.0)) {
    throw ParseError(source, 0, "temperature_k must be positive");
  }
  return t;
}

FrequencyTrace read_touchstone(std::istream& in, int ports, const std::string& source) {
  if (ports != 1 && ports != 2) throw ParseError(source, 0, "only 1- and 2-port files are supported");
  double unit = 1e9;  // Touchstone default GHZ
  enum class Fmt { RI, MA, DB } fmt = Fmt::MA;
  bool have_options = false;

  const std::size_t per_record = 1 + 2 * static_cast<std::size_t>(ports * ports);
  std::vector<double> pending;
  std::size_t record_line = 0;
  FrequencyTrace t;

  auto flush_record = [&]() {
    const double f = pending[0] * unit;
    // .s1p: S11 at [1,2]; .s2p: S11, S21, S12, S22 -> S21 at [3,4].
    const std::size_t k = ports == 1 ? 1 : 3;
    const double x = pending[k], y = pending[k + 1];
    complex z;
    switch (fmt) {
      case Fmt::RI: z = {x, y}; break;
      case Fmt::MA: z = std::polar(x, y * constants::pi / 180.0); break;
      case Fmt::DB: z = std::polar(std::pow(10.0, x / 20.0), y * constants::pi / 180.0); break;
    }
    append_sample(t, f, z, source, record_line);
    pending.clear();
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto bang = s.find('!'); bang != std::string_view::npos) s = s.substr(0, bang);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      throw ParseError(source, lineno, "unsupported Touchstone version (keyword '" +
                                           std::string(s) + "'); only v1 is read");
    }
    if (s.front() == '#') {
      if (have_options) throw ParseError(source, lineno, "duplicate option line");
      have_options = true;
      const auto tok = split_ws(s.substr(1));
      for (std::size_t i = 0; i < tok.size(); ++i) {
        const auto w = lower(tok[i]);
        if (w == "hz") unit = 1.0;
        else if (w == "khz") unit = 1e3;
        else if (w == "mhz") unit = 1e6;
        else if (w == "ghz") unit = 1e9;
        else if (w == "ri") fmt = Fmt::RI;
        else if (w == "ma") fmt = Fmt::MA;
        else if (w == "db") fmt = Fmt::DB;
        else if (w == "s") continue;
        else if (w == "y" || w == "z" || w == "h" || w == "g") {
          throw ParseError(source, lineno, "only S-parameter files are supported");
        } else if (w == "r") {
          if (i + 1 >= tok.size() || !parse_double(tok[i + 1])) {
            throw ParseError(source, lineno, "option 'R' needs a reference impedance");
          }
          ++i;
        } else {
          throw ParseError(source, lineno, "unknown option '" + std::string(tok[i]) + "'");
        }
      }
      continue;
    }
    for (const auto tok : split_ws(s)) {
      const auto v = parse_double(tok);
      if (!v) throw ParseError(source, lineno, "unparsable number '" + std::string(tok) + "'");
      if (pending.empty()) record_line = lineno;
      pending.push_back(*v);
      if (pending.size() == per_record) flush_record();
    }
  }
  if (!pending.empty()) throw ParseError(source, record_line, "incomplete data record");
  finish(t, source);
  return t;
}

FrequencyTrace read_trace(const std::filesystem::path& path, TraceFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  const auto ext = lower(path.extension().string());
  if (format == TraceFormat::Auto) {
    if (ext == ".csv") format = TraceFormat::Csv;
    else if (ext == ".s1p" || ext == ".s2p") format = TraceFormat::Touchstone;
    else throw ParseError(path.string(), 0, "cannot infer trace format from extension '" + ext + "'");
  }
  if (format == TraceFormat::Csv) return read_trace_csv(in, path.string());
  int ports = 2;
  if (ext == ".s1p") ports = 1;
  else if (ext != ".s2p") throw ParseError(path.string(), 0, "Touchstone file must be .s1p or .s2p");
  auto t = read_touchstone(in, ports, path.string());
  if (t.label.empty()) t.label = path.stem().string();
  return t;
}

void write_trace_csv(const FrequencyTrace& trace, std::ostream& out) {
  if (trace.size() == 0) throw IoError("write_trace: empty trace");
  trace.validate();
  if (!trace.label.empty()) out << "# label=" << trace.label << '\n';
  if (trace.power_dbm) out << "# power_dbm=" << format_double(*trace.power_dbm) << '\n';
  if (trace.temperature_k) out << "# temperature_k=" << format_double(*trace.temperature_k) << '\n';
  for (const auto& [k, v] : trace.attributes) out << "# " << k << '=' << v << '\n';
  out << "freq_hz,re,im\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << format_double(trace.frequency[i]) << ',' << format_double(trace.s21[i].real()) << ','
        << format_double(trace.s21[i].imag()) << '\n';
  }
}

void write_trace(const FrequencyTrace& trace, const std::filesystem::path& path) {
  std::ostringstream buf;
  write_trace_csv(trace, buf);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << buf.str();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace tadpole::io
