#pragma once

#include <stdexcept>
#include <string>

namespace lwr {

/// Scenario or config file is structurally invalid (gaps, overlaps, missing
/// fields, out-of-range data). Maps to CLI exit code 2.
class schema_error : public std::runtime_error {
public:
  explicit schema_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numeric or run configuration problem (CFL violation, bad grid spacing).
/// Maps to CLI exit code 3.
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lwr
