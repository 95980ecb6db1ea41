#pragma once

#include <stdexcept>
#include <string>

namespace hhv {

/// The hypotheses of a check are not met (e.g. f leaves (0, inf)), as opposed
/// to the check being carried out and failing.
class NotApplicableError : public std::runtime_error {
public:
  explicit NotApplicableError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace hhv
