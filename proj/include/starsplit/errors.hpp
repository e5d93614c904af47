#pragma once

#include <stdexcept>
#include <string>

namespace starsplit {

// Malformed or out-of-domain input: bad files, non-integrable structures,
// non-positive metrics, singular parameters. Maps to CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace starsplit
