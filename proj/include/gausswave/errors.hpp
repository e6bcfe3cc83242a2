#pragma once

#include <stdexcept>
#include <string>

namespace gw {

struct NonEllipticField : std::runtime_error {
  explicit NonEllipticField(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidConfig : std::invalid_argument {
  explicit InvalidConfig(const std::string& msg) : std::invalid_argument(msg) {}
};

struct SizeOverflow : std::runtime_error {
  explicit SizeOverflow(const std::string& msg) : std::runtime_error(msg) {}
};

struct OutOfBand : std::runtime_error {
  explicit OutOfBand(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::domain_error {
  explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

struct StepFailure : std::runtime_error {
  explicit StepFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct HorizonExceeded : std::runtime_error {
  explicit HorizonExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonContraction : std::runtime_error {
  explicit NonContraction(const std::string& msg) : std::runtime_error(msg) {}
};

struct IndexMismatch : std::logic_error {
  explicit IndexMismatch(const std::string& msg) : std::logic_error(msg) {}
};

struct DivisionDegeneracy : std::runtime_error {
  explicit DivisionDegeneracy(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace gw
