#include "neurobands/errors.hpp"

#include <utility>

namespace neurobands {

MontageError::MontageError(std::string electrode, const std::string& detail)
    : Error("MontageError: " + electrode + (detail.empty() ? "" : " (" + detail + ")")),
      electrode_(std::move(electrode)) {}

}  // namespace neurobands
