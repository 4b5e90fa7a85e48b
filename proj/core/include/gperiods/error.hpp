#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gp {

enum class Errc {
  not_coprime,
  not_divisor,
  too_large,
  overflow,
  arity_mismatch,
  palette_too_small,
  invalid_dimension,
  invalid_argument,
  io_error,
};

/// Machine-readable name, e.g. "not_coprime". Used verbatim in HTTP error payloads.
std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace gp
