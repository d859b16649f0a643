#pragma once

#include <stdexcept>
#include <string>

namespace radlite {

/// Bad or inconsistent input data: unreadable files, schema violations,
/// misaligned records, degenerate metric inputs.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Inference endpoint unreachable or persistently failing at the
/// connection level.
class EndpointError : public std::runtime_error {
 public:
  explicit EndpointError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace radlite
