#pragma once

#include <stdexcept>
#include <string>

namespace llt {

//! Base class for every error raised by the lab.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Invalid parameter passed to a constructor or operation.
class ParameterError : public Error
{
public:
  using Error::Error;
};

class UnsupportedDimension : public Error
{
public:
  using Error::Error;
};

class UnsupportedOrder : public Error
{
public:
  using Error::Error;
};

//! The frequency window of a grid is too small for the requested use.
class WindowError : public Error
{
public:
  using Error::Error;
};

//! The tail of |f| beyond the frequency window is not negligible; the
//! caller must widen the grid (larger N or smaller step).
class InsufficientWindow : public WindowError
{
public:
  using WindowError::WindowError;
};

class UnboundedDensity : public Error
{
public:
  using Error::Error;
};

class PreconditionError : public Error
{
public:
  using Error::Error;
};

class DegenerateTruncation : public Error
{
public:
  using Error::Error;
};

//! Configuration text could not be parsed or validated.
class ParseError : public Error
{
public:
  ParseError(const std::string& what, int line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what)
    , line_(line)
  {}
  int line() const { return line_; }

private:
  int line_;
};

class IoError : public Error
{
public:
  using Error::Error;
};

} // namespace llt
