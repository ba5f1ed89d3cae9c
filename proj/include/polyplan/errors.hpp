#pragma once

#include <stdexcept>
#include <string>

namespace polyplan {

// Invalid input data: malformed files, bad rings, overlapping obstacles.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Linear solve rejected because junction times are too close together.
class ConditioningError : public std::runtime_error {
  public:
    ConditioningError(const std::string& msg, double gap)
        : std::runtime_error(msg), gap_(gap) {}
    double gap() const { return gap_; }

  private:
    double gap_;
};

}  // namespace polyplan
