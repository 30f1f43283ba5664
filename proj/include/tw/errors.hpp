#pragma once

#include <stdexcept>
#include <string>

namespace tw {

enum class Errc {
  parse,
  undeclared_atom,
  unsupported_fragment,
  validation,
  coordinate_mismatch,
  invalid_cut,
  unsupported_cancellation,
  empty_order,
  not_regular_uncountable,
  not_uncountable,
  domain,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, std::string msg) { throw Error(code, std::move(msg)); }

}  // namespace tw
