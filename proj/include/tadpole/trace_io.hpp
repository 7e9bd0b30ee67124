#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "tadpole/trace.hpp"

namespace tadpole::io {

enum class TraceFormat { Auto, Csv, Touchstone };

/// Auto picks by extension: .csv, .s1p, .s2p.
FrequencyTrace read_trace(const std::filesystem::path& path, TraceFormat format = TraceFormat::Auto);

/// CSV with optional `# key=value` metadata lines followed by header `freq_hz,re,im`.
FrequencyTrace read_trace_csv(std::istream& in, const std::string& source = "<stream>");

/// Touchstone v1. `ports` is 1 (.s1p, uses S11) or 2 (.s2p, uses S21).
FrequencyTrace read_touchstone(std::istream& in, int ports, const std::string& source = "<stream>");

/// Writes `freq_hz,re,im` with 17 significant digits. Touchstone is read-only.
void write_trace(const FrequencyTrace& trace, const std::filesystem::path& path);
void write_trace_csv(const FrequencyTrace& trace, std::ostream& out);

/// printf("%.17g") formatting shared by every CSV writer.
std::string format_double(double v);

}  // namespace tadpole::io
