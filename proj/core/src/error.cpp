#include "gperiods/error.hpp"

namespace gp {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::not_coprime: return "not_coprime";
    case Errc::not_divisor: return "not_divisor";
    case Errc::too_large: return "too_large";
    case Errc::overflow: return "overflow";
    case Errc::arity_mismatch: return "arity_mismatch";
    case Errc::palette_too_small: return "palette_too_small";
    case Errc::invalid_dimension: return "invalid_dimension";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace gp
