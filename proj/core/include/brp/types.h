#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace brp {

using NodeId = std::int32_t;
using ClusterId = std::int32_t;
using Cost = std::int64_t;

enum class Errc {
  InvalidParams,
  InvalidRequest,
  CapacityExceeded,
  DuplicateNode,
  UnknownCluster,
  UnknownNode,
  ShapeMismatch,
  AdversaryStuck,
  InsufficientAugmentation,
  NoEligibleCluster,
  GeometryError,
  StateDiverged,
  TooLarge,
  MalformedProfile,
  MalformedPagingSequence,
  BadProbability,
  ParseError,
  NodeOutOfRange,
  InvalidSpec,
};

std::string_view to_string(Errc code);

// Every failure raised by the library carries one of the codes above so that
// callers (and tests) can dispatch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), _code(code) {}

  [[nodiscard]] Errc code() const noexcept { return _code; }

 private:
  Errc _code;
};

} // namespace brp
