#pragma once

#include <stdexcept>
#include <string>

namespace motivic {

enum class ErrorKind {
  InvalidArgument,
  VariableMismatch,
  FieldMismatch,
  NotFinite,
  NotLocal,
  InfiniteField,
  CapExceeded,
  Unsupported,
  AmbientMismatch,
  BaseMismatch,
  LevelOutOfRange,
  NotClosedImmersion,
  ChainFailure,
  Incompatible,
};

const char* to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind is
/// stable and is what the command line front end maps to diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

/// Resource limits applied to user-facing operations.
struct Caps {
  std::size_t max_variables = 12;
  unsigned max_degree = 8;
  std::size_t max_arc_coordinates = 96;
  std::uint64_t max_candidates = std::uint64_t{1} << 20;
  std::size_t max_cells = 512;
};

}  // namespace motivic
