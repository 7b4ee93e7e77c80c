#pragma once

#include <stdexcept>
#include <string>

namespace skycloud {

enum class ErrorKind {
  Decode,          // unreadable or undecodable raster
  InvalidArgument, // precondition violated by a caller-supplied value
  EmptyRoi,
  Timestamp,
  NoValidSky,
  Format,          // malformed CMG1 / CSV / config content
  DimensionMismatch,
  InvalidCode,
  NoValidSatelliteData,
  EmptyCatalog,
  NoMatchInWindow,
  Io,
};

/// Library-wide exception. `kind()` lets callers branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace skycloud
