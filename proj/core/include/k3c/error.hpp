#pragma once

#include <stdexcept>
#include <string>

namespace k3c {

// Domain error raised by every module. `code` is a stable snake_case tag
// used in the CLI's structured error object; `location` is optional context
// (a point on the sphere, a JSON path, a matrix index).
class Error : public std::runtime_error {
 public:
  Error(std::string code, std::string const& message, std::string location = {})
      : std::runtime_error(message), code_(std::move(code)), location_(std::move(location)) {}

  std::string const& code() const noexcept { return code_; }
  std::string const& location() const noexcept { return location_; }

 private:
  std::string code_;
  std::string location_;
};

}  // namespace k3c
