#pragma once

#include <stdexcept>
#include <string>

#include "catgraph/bigint.hpp"

namespace catgraph {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violated a documented precondition (bad counts, malformed
/// matrix, dimension mismatch, ...).  The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed a resource guard (enumeration caps, subset
/// size limits).  The CLI maps these to exit code 3.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Enumeration would produce more objects than the caller's cap.
/// Carries the exact count so callers can report it.
class CapExceeded : public ResourceError {
 public:
  CapExceeded(std::string what, BigInt count)
      : ResourceError(std::move(what)), count_(std::move(count)) {}
  const BigInt& count() const { return count_; }

 private:
  BigInt count_;
};

class TooManyOddCategories : public ResourceError {
 public:
  TooManyOddCategories(std::string what, int k0)
      : ResourceError(std::move(what)), k0_(k0) {}
  int odd_category_count() const { return k0_; }

 private:
  int k0_;
};

class SubsetTooLarge : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

/// exact_perm_distribution refused: C(N, n_a) beyond its enumeration bound.
class TooLarge : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

}  // namespace catgraph
