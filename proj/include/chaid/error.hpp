#pragma once

#include <stdexcept>
#include <string>

namespace chaid {

// All library failures surface as this type; what() is a single line.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chaid
