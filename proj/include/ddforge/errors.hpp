#pragma once

#include <stdexcept>
#include <string>

namespace ddforge {

// Base class for every error raised by the library. The CLI maps ConfigError
// to exit code 2 and BackendError to exit code 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define DDFORGE_DECLARE_ERROR(Name, Base)                            \
  class Name : public Base {                                         \
   public:                                                           \
    explicit Name(const std::string& what) : Base(#Name ": " + what) {} \
  };

DDFORGE_DECLARE_ERROR(InvalidArgument, Error)
DDFORGE_DECLARE_ERROR(ColoringOverflow, Error)
DDFORGE_DECLARE_ERROR(InvalidPopulationSize, Error)
DDFORGE_DECLARE_ERROR(InvalidEdge, Error)
DDFORGE_DECLARE_ERROR(InvalidSequence, Error)
DDFORGE_DECLARE_ERROR(TooManyQubits, Error)
DDFORGE_DECLARE_ERROR(NondeterministicOutcome, Error)
DDFORGE_DECLARE_ERROR(FitFailure, Error)
DDFORGE_DECLARE_ERROR(UnsupportedGate, Error)
DDFORGE_DECLARE_ERROR(NonInvertibleGate, Error)
DDFORGE_DECLARE_ERROR(TopologyTooSmall, Error)
DDFORGE_DECLARE_ERROR(TopologyDisconnected, Error)
DDFORGE_DECLARE_ERROR(NoInsertableGaps, Error)
DDFORGE_DECLARE_ERROR(ConfigError, Error)
DDFORGE_DECLARE_ERROR(BackendError, Error)
DDFORGE_DECLARE_ERROR(Unsupported, BackendError)
DDFORGE_DECLARE_ERROR(CheckpointCorrupt, Error)

#undef DDFORGE_DECLARE_ERROR

}  // namespace ddforge
