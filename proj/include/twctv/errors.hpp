#ifndef TWCTV_ERRORS_HPP
#define TWCTV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace twctv {

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Incompatible tensor/matrix dimensions.
class ShapeError : public Error {
public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Invalid parameter or configuration value.
class ParamError : public Error {
public:
  explicit ParamError(const std::string& msg) : Error(msg) {}
};

// File format or filesystem failure.
class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// Numerical breakdown (divergence, non-finite iterates, failed scalar solve).
class NumericError : public Error {
public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

}  // namespace twctv

#endif
