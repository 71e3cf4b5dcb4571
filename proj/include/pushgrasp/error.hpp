#pragma once

#include <stdexcept>
#include <string>

namespace pushgrasp {

enum class Errc {
  NotConvex,
  Degenerate,
  OpeningOutOfRange,
  EmptyIntersection,
  InitialPenetration,
  NonConvergent,
  PlacementFailed,
  InvalidInput,
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NotConvex: return "NotConvex";
    case Errc::Degenerate: return "Degenerate";
    case Errc::OpeningOutOfRange: return "OpeningOutOfRange";
    case Errc::EmptyIntersection: return "EmptyIntersection";
    case Errc::InitialPenetration: return "InitialPenetration";
    case Errc::NonConvergent: return "NonConvergent";
    case Errc::PlacementFailed: return "PlacementFailed";
    case Errc::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace pushgrasp
