#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace crflow {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define CRFLOW_ERROR(Name)            \
  struct Name : Error {               \
    using Error::Error;               \
  }

CRFLOW_ERROR(NoPhysicalRoot);
CRFLOW_ERROR(UnsupportedCutoff);
CRFLOW_ERROR(NotConverged);
CRFLOW_ERROR(LabelAmbiguity);
CRFLOW_ERROR(OrderUnsupported);
CRFLOW_ERROR(FitFailed);
CRFLOW_ERROR(ZeroZX);
CRFLOW_ERROR(MismatchClosedForm);
CRFLOW_ERROR(NonUnitaryInput);
CRFLOW_ERROR(OutOfRange);
CRFLOW_ERROR(LabelCrossing);
CRFLOW_ERROR(UnitError);

#undef CRFLOW_ERROR

struct SchemaError : Error {
  SchemaError(std::string field, const std::string& what)
      : Error(field + ": " + what), path(std::move(field)) {}
  std::string path;
};

// One matrix element that sits on a vanishing denominator.
struct PoleEntry {
  int row = 0;
  int col = 0;
  double harmonic = 0.0;   // drive-harmonic part of the frequency
  double frequency = 0.0;  // full oscillation frequency of the element
  std::complex<double> value;
};

struct ResonancePole : Error {
  ResonancePole(double freq, std::vector<PoleEntry> e)
      : Error("resonance pole at " + std::to_string(freq) + " MHz"),
        frequency(freq),
        entries(std::move(e)) {}
  double frequency;
  std::vector<PoleEntry> entries;
};

}  // namespace crflow
