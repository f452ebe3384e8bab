#pragma once

#include <stdexcept>
#include <string>

namespace sheetlab {

// Error taxonomy used across the library:
//   std::invalid_argument  -- malformed values, dimension mismatches
//   std::domain_error      -- arguments outside an operation's domain
//   resource_error         -- a configured cell/point budget was exceeded
//   numeric_error          -- a numeric procedure could not complete
//   config_error           -- bad config text (carries a line number)

class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class config_error : public std::invalid_argument {
 public:
  config_error(const std::string& message, int line = 0)
      : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + message
                                       : message),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_ = 0;
};

}  // namespace sheetlab
