#pragma once

#include <stdexcept>
#include <string>

namespace walshprep {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Register size out of range or not a power of two.
class SizeError : public Error {
  public:
    using Error::Error;
};

/// Operands whose lengths or layouts disagree.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// Malformed connectivity graph or topology request.
class TopologyError : public Error {
  public:
    using Error::Error;
};

/// Configuration or input data that fails a precondition.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Request outside what the library can synthesize or run.
class UnsupportedError : public Error {
  public:
    using Error::Error;
};

/// Unreadable or unparsable file contents.
class ParseError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
  public:
    DivergenceError(int epoch, double last_finite_loss);

    int epoch() const noexcept { return epoch_; }
    double last_finite_loss() const noexcept { return last_finite_loss_; }

  private:
    int epoch_;
    double last_finite_loss_;
};

} // namespace walshprep
