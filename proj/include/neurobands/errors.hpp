#pragma once

#include <stdexcept>
#include <string>

namespace neurobands {

// Root of every error raised by the library. Each subclass names the
// contract that was violated so callers (and the CLI) can map them to
// exit codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define NEUROBANDS_DEFINE_ERROR(Name)              \
  class Name : public Error {                      \
   public:                                         \
    explicit Name(const std::string& what)         \
        : Error(std::string(#Name ": ") + what) {} \
  }

// core-data
NEUROBANDS_DEFINE_ERROR(FormatError);
NEUROBANDS_DEFINE_ERROR(TruncatedError);
NEUROBANDS_DEFINE_ERROR(LabelRangeError);
NEUROBANDS_DEFINE_ERROR(SpecError);
NEUROBANDS_DEFINE_ERROR(IoError);

// preprocess
NEUROBANDS_DEFINE_ERROR(FilterError);
NEUROBANDS_DEFINE_ERROR(ResampleError);
NEUROBANDS_DEFINE_ERROR(TrimError);

// spectral
NEUROBANDS_DEFINE_ERROR(FftSizeError);
NEUROBANDS_DEFINE_ERROR(BandError);
NEUROBANDS_DEFINE_ERROR(WindowError);

// electrode sets
NEUROBANDS_DEFINE_ERROR(LobeError);
NEUROBANDS_DEFINE_ERROR(SetIdError);

// neural
NEUROBANDS_DEFINE_ERROR(ConfigError);
NEUROBANDS_DEFINE_ERROR(ShapeError);
NEUROBANDS_DEFINE_ERROR(StateError);
NEUROBANDS_DEFINE_ERROR(DataError);

// harness
NEUROBANDS_DEFINE_ERROR(SplitError);

#undef NEUROBANDS_DEFINE_ERROR

// Unknown electrode name. Carries the offending name separately so the CLI
// can report it verbatim.
class MontageError : public Error {
 public:
  explicit MontageError(std::string electrode, const std::string& detail = {});
  const std::string& electrode() const noexcept { return electrode_; }

 private:
  std::string electrode_;
};

}  // namespace neurobands
