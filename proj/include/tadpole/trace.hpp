#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tadpole {

using complex = std::complex<double>;

inline constexpr std::size_t kMinTracePoints = 5;

/// Complex transmission sampled on a strictly increasing frequency grid.
struct FrequencyTrace {
  std::vector<double> frequency;  // Hz
  std::vector<complex> s21;
  std::string label;
  std::optional<double> power_dbm;
  std::optional<double> temperature_k;
  /// Free-form provenance (generator algorithm, seed, ...). Serialized as comment lines.
  std::map<std::string, std::string> attributes;

  std::size_t size() const { return frequency.size(); }

  /// Throws DomainError naming the first offending row (1-based sample index).
  void validate() const;

  bool operator==(const FrequencyTrace&) const = default;
};

/// Samples with frequency in [f_lo, f_hi]; metadata is copied.
FrequencyTrace slice(const FrequencyTrace& trace, double f_lo, double f_hi);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

}  // namespace tadpole
