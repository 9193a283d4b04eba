#pragma once

#include <stdexcept>
#include <string>

namespace stiefel_cayley {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix that had to be inverted is singular under the requested tolerance.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// A tangent vector (or skew block) fails its defining identity.
class InvalidTangent : public Error {
 public:
  using Error::Error;
};

/// y is not in the Cayley open subset of x (pi + P^* is singular).
class OutsideCayleyOpen : public Error {
 public:
  using Error::Error;
};

/// Matrix is not unitary, or a frame is not orthonormal.
class NotOnManifold : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

/// Operands live over different base rings.
class FieldMismatch : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A guarantee that holds in exact arithmetic was broken by rounding.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace stiefel_cayley
