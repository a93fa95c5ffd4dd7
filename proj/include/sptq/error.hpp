#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sptq {

// All failures carry a stable machine-parseable code; the CLI prints them as
// "error[CODE]: message" on the diagnostic stream.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

namespace errc {
inline constexpr const char* schema = "E_SCHEMA";
inline constexpr const char* range = "E_RANGE";
inline constexpr const char* dimension = "E_DIM";
inline constexpr const char* state = "E_STATE";
inline constexpr const char* degenerate = "E_DEGENERATE";
inline constexpr const char* underdetermined = "E_UNDERDETERMINED";
inline constexpr const char* budget = "E_BUDGET";
inline constexpr const char* io = "E_IO";
}  // namespace errc

}  // namespace sptq
