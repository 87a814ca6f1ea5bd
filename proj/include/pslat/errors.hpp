#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pslat {

/// Library error carrying a stable machine-readable kind tag.
/// The kind strings ("NotSquare", "Singular", "NotExceptional", ...) are part
/// of the public contract: the CLI prints them verbatim on failure.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, const std::string& kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace pslat
