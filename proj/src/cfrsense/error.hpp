#pragma once

#include <stdexcept>
#include <string>

namespace cfrsense {

// Bad configuration or bad arguments to an operation.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent data (corrupt frames, bad CSV rows, hash
// mismatches). Maps to CLI exit code 2.
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// CSV / manifest parse failure; carries the 1-based line number when known.
struct parse_error : data_error {
  parse_error(const std::string& msg, long line = -1)
      : data_error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_number(line) {}
  long line_number;
};

// Training failures (degenerate data, divergence, boosting failure).
struct model_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cfrsense
