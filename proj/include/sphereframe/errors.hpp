#pragma once

#include <stdexcept>
#include <string>

namespace sphereframe {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid scalar argument (dimension, degree, Gegenbauer index, ...).
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Multi-index outside the index set of its degree.
class IndexError : public Error {
public:
  using Error::Error;
};

/// Argument outside the mathematical domain (off-sphere point, negative radicand).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Quadrature rule not exact enough for the requested integral.
class ExactnessError : public Error {
public:
  using Error::Error;
};

/// Requested grid exceeds the configured node cap.
class CapacityError : public Error {
public:
  CapacityError(const std::string& what, std::size_t requested, std::size_t cap)
      : Error(what + " (requested " + std::to_string(requested) + " nodes, cap " +
              std::to_string(cap) + ")"),
        requested_(requested), cap_(cap) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t cap() const noexcept { return cap_; }

private:
  std::size_t requested_;
  std::size_t cap_;
};

/// sigma_n vanishes on the support of a spec that must be a frame.
class NotAFrameError : public Error {
public:
  using Error::Error;
};

/// Zero signal, or zero center of mass where a variance is requested.
class DegenerateSignalError : public Error {
public:
  using Error::Error;
};

/// Closed-form evaluation requested for a spec of the wrong structure.
class ShapeError : public Error {
public:
  using Error::Error;
};

class UnsupportedDimensionError : public Error {
public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
public:
  using Error::Error;
};

}  // namespace sphereframe
