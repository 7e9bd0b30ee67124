#include "tadpole/trace.hpp"

#include <cmath>

#include "tadpole/errors.hpp"

namespace tadpole {

void FrequencyTrace::validate() const {
  if (frequency.size() != s21.size()) {
    throw DomainError("trace: " + std::to_string(frequency.size()) + " frequencies but " +
                      std::to_string(s21.size()) + " samples");
  }
  if (frequency.size() < kMinTracePoints) {
    throw DomainError("trace: at least " + std::to_string(kMinTracePoints) +
                      " points required, got " + std::to_string(frequency.size()));
  }
  for (std::size_t i = 0; i < frequency.size(); ++i) {
    const auto row = std::to_string(i + 1);
    if (!std::isfinite(frequency[i])) throw DomainError("trace row " + row + ": non-finite frequency");
    if (!std::isfinite(s21[i].real()) || !std::isfinite(s21[i].imag())) {
      throw DomainError("trace row " + row + ": non-finite sample");
    }
    if (i > 0 && !(frequency[i] > frequency[i - 1])) {
      throw DomainError("trace row " + row + ": frequency grid not strictly increasing");
    }
  }
  if (power_dbm && !std::isfinite(*power_dbm)) throw DomainError("trace: non-finite power metadata");
  if (temperature_k && !(*temperature_k > 0.0)) {
    throw DomainError("trace: temperature metadata must be positive");
  }
}

FrequencyTrace slice(const FrequencyTrace& trace, double f_lo, double f_hi) {
  FrequencyTrace out;
  out.label = trace.label;
  out.power_dbm = trace.power_dbm;
  out.temperature_k = trace.temperature_k;
  out.attributes = trace.attributes;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace.frequency[i] >= f_lo && trace.frequency[i] <= f_hi) {
      out.frequency.push_back(trace.frequency[i]);
      out.s21.push_back(trace.s21[i]);
    }
  }
  return out;
}

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

double watts_to_dbm(double watts) {
  if (!(watts > 0.0)) throw DomainError("watts_to_dbm: power must be positive");
  return 10.0 * std::log10(watts / 1e-3);
}

}  // namespace tadpole
