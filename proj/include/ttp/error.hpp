#pragma once

#include <stdexcept>
#include <string>

namespace ttp {

enum class Errc {
  invalid_argument = 1,
  io = 2,
  parse = 3,
  no_data = 4,
  infeasible = 5,
  internal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace ttp
