#pragma once

#include <stdexcept>
#include <string>

namespace airhockey {

// Raised for contract violations across the library. Messages are one line so
// the CLI can forward them verbatim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace airhockey
