#pragma once

#include <stdexcept>
#include <string>

namespace gridwatch {

// Single exception type for every contract violation surfaced by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gridwatch
