#pragma once

#include <stdexcept>
#include <string>

namespace verlinde {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StructuralError : public Error { public: using Error::Error; };
class InvalidMove : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class PreconditionError : public Error { public: using Error::Error; };
class AdmissibilityError : public Error { public: using Error::Error; };
class ConvergenceError : public Error { public: using Error::Error; };
class ResourceLimit : public Error { public: using Error::Error; };
class PathError : public Error { public: using Error::Error; };
class RepresentationError : public Error { public: using Error::Error; };
class UsageError : public Error { public: using Error::Error; };

// Raised when two independent computations of the same quantity disagree.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace verlinde
