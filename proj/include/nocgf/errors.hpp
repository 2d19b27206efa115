#pragma once

#include <stdexcept>
#include <string>

namespace nocgf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct ContractViolation : Error { using Error::Error; };
struct AccuracyError : Error { using Error::Error; };
struct DegeneracyError : Error { using Error::Error; };
struct ConsistencyError : Error { using Error::Error; };
struct UnsupportedSystem : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct BandwidthUndefined : Error { using Error::Error; };
struct DegenerateRealization : Error { using Error::Error; };

}  // namespace nocgf
