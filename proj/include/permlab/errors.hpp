#pragma once

#include <stdexcept>
#include <string>

namespace permlab {

// Raised when a request is refused because its estimated cost exceeds a
// configured budget (CLI maps this to exit code 2).
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace permlab
