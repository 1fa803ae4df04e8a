#pragma once

#include <stdexcept>
#include <string>

namespace ising {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a request exceeds an exact engine's size limit. The CLI maps
// this family to exit code 3.
struct CapacityExceeded : Error {
    using Error::Error;
};
struct WidthExceeded : CapacityExceeded {
    using CapacityExceeded::CapacityExceeded;
};

struct SupportOutOfBox : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct OddSiteCount : Error { using Error::Error; };
struct IncompatibleFamily : Error { using Error::Error; };
struct NotSingleInterface : Error { using Error::Error; };
struct SignalBelowNoise : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace ising
