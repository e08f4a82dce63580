#pragma once

#include <stdexcept>

namespace riskcal {

// Input rows or files that fail validation (CLI exit code 2).
class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Calibration cannot certify any parameter at the requested levels
// (CLI exit code 3 for `calibrate`).
class infeasible_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration (CLI exit code 1).
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace riskcal
