#pragma once
#include <stdexcept>
#include <string>

namespace tc {

// Domain errors carry a stable code used by the CLI for exit status 1.
struct domain_error : std::runtime_error {
  std::string code;
  domain_error(std::string c, const std::string& what)
      : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

// I/O or schema errors map to CLI exit status 2.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

inline domain_error err(const char* code, const std::string& what) {
  return domain_error(code, what);
}

}  // namespace tc
