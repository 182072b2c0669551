// error.hpp
// Exception types shared by every hyperch module.

#pragma once

#include <stdexcept>
#include <string>

namespace hyperch {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument (bad derivative order, out-of-range mode index, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Fields living on different domains, or arrays of the wrong length.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A computation produced NaN or Inf. Carries the simulation time when known.
class NumericalOverflowError : public Error {
 public:
  NumericalOverflowError(const std::string& what, double time)
      : Error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}
  explicit NumericalOverflowError(const std::string& what) : Error(what) {}

  double time() const { return time_; }

 private:
  double time_ = -1.0;
};

/// The positivity guard of an implicit step rejected the step size.
class StepSizeError : public Error {
 public:
  StepSizeError(const std::string& what, double time)
      : Error("positivity guard: " + what + " (t = " + std::to_string(time) + ")"),
        time_(time) {}

  double time() const { return time_; }

 private:
  double time_;
};

/// Invalid experiment configuration; names the offending field and line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, int line, const std::string& what)
      : Error("config error in '" + field + "'" +
              (line >= 0 ? " (line " + std::to_string(line + 1) + ")" : std::string()) + ": " +
              what),
        field_(field),
        line_(line) {}

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

/// Missing or unreadable input/output file.
class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace hyperch
