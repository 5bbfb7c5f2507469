#pragma once

#include <stdexcept>
#include <string>

namespace pcim {

enum class Errc {
  // map construction and evaluation
  NotAContraction,
  ImageEscapesDomain,
  UnorderedCuts,
  ZeroSlope,
  OnCutPoint,
  OutOfDomain,
  NotACutPoint,
  BadParameters,
  MalformedDefinition,
  // itineraries and complexity
  PrefixTooShort,
  ItineraryLeftXtilde,
  AlphaOutOfRange,
  LeftXtilde,
  // atoms and analysis
  DepthOverflow,
  SeparationRequired,
  LambdaDegenerate,
  EpsilonTooLarge,
  RepresentativeOnDeltaPreimage,
  // file parsing and CLI
  SyntaxError,
  NonCanonicalRational,
  ValidationError,
};

const char* errc_name(Errc code);

class PcimError : public std::runtime_error {
 public:
  PcimError(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw PcimError(code, message);
}

}  // namespace pcim
