#pragma once

#include <stdexcept>
#include <string>

namespace stopcal {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class BoundaryIndexError : public Error {
 public:
  explicit BoundaryIndexError(const std::string& what) : Error(what) {}
};

class EmptyEffectiveDomainError : public Error {
 public:
  explicit EmptyEffectiveDomainError(const std::string& what) : Error(what) {}
};

class NotUConvexError : public Error {
 public:
  explicit NotUConvexError(const std::string& what) : Error(what) {}
};

class NotGConvexError : public Error {
 public:
  explicit NotGConvexError(const std::string& what) : Error(what) {}
};

class UnknownFamilyError : public Error {
 public:
  explicit UnknownFamilyError(const std::string& what) : Error(what) {}
};

class MixedSignError : public Error {
 public:
  explicit MixedSignError(const std::string& what) : Error(what) {}
};

class NotConvexError : public Error {
 public:
  explicit NotConvexError(const std::string& what) : Error(what) {}
};

class NotNormalizedError : public Error {
 public:
  explicit NotNormalizedError(const std::string& what) : Error(what) {}
};

class DegenerateStringError : public Error {
 public:
  explicit DegenerateStringError(const std::string& what) : Error(what) {}
};

class NonConvexInputError : public Error {
 public:
  explicit NonConvexInputError(const std::string& what) : Error(what) {}
};

class CollidingStatesError : public Error {
 public:
  explicit CollidingStatesError(const std::string& what) : Error(what) {}
};

class StepTooCoarseError : public Error {
 public:
  explicit StepTooCoarseError(const std::string& what) : Error(what) {}
};

class ZeroCurvatureError : public Error {
 public:
  explicit ZeroCurvatureError(const std::string& what) : Error(what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace stopcal
