#ifndef MOODCRL_ERRORS_HPP_
#define MOODCRL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace moodcrl {

// Bad input: wrong dimensions, malformed files, violated preconditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation produced NaN/Inf or diverged.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace moodcrl

#endif  // MOODCRL_ERRORS_HPP_
