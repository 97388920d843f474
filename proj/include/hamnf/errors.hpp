#pragma once

#include <stdexcept>
#include <string>

namespace hamnf {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ParityError : public Error {
 public:
  using Error::Error;
};

/// A symmetric matrix has an eigenvalue inside the zero band.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Input is not Hamiltonian (or otherwise violates a structural precondition).
class StructureError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Jordan-chain / sign-characteristic extraction was too ill-conditioned.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// The sampled field nearly vanishes on the degree circle.
class RadiusError : public Error {
 public:
  using Error::Error;
};

class SplittingError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double exit_time)
      : Error(what), exit_time_(exit_time) {}
  double exit_time() const { return exit_time_; }

 private:
  double exit_time_;
};

class CorrectorFailure : public Error {
 public:
  CorrectorFailure(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace hamnf
