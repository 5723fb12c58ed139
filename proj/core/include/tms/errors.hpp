#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tms {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMetric : public Error {
 public:
  explicit SingularMetric(double det)
      : Error("singular induced metric (det h = " + std::to_string(det) + ")"),
        det_(det) {}
  double det() const { return det_; }

 private:
  double det_;
};

/// det h >= -1e-14: the graph has lost its timelike character.
class SpacelikeDegeneration : public Error {
 public:
  explicit SpacelikeDegeneration(double det)
      : Error("induced metric is not Lorentzian (det h = " + std::to_string(det) + ")"),
        det_(det) {}
  double det() const { return det_; }

 private:
  double det_;
};

/// The coercivity bound sum|H - eta delta| < 1/2 failed at `cell`.
class CoercivityLost : public Error {
 public:
  CoercivityLost(std::size_t cell, double margin)
      : Error("coercivity lost at cell " + std::to_string(cell) +
              " (margin " + std::to_string(margin) + ")"),
        cell_(cell),
        margin_(margin) {}
  std::size_t cell() const { return cell_; }
  double margin() const { return margin_; }

 private:
  std::size_t cell_;
  double margin_;
};

class NonFinite : public Error {
 public:
  explicit NonFinite(std::size_t index)
      : Error("non-finite sample at index " + std::to_string(index)), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class SingularBlock : public Error {
 public:
  explicit SingularBlock(std::size_t cell)
      : Error("H^{00} block is singular at cell " + std::to_string(cell)), cell_(cell) {}
  std::size_t cell() const { return cell_; }

 private:
  std::size_t cell_;
};

class UnresolvableProfile : public Error {
 public:
  using Error::Error;
};

class IncompatibleWithPeriodicity : public Error {
 public:
  using Error::Error;
};

class IncompleteSeries : public Error {
 public:
  using Error::Error;
};

class DegenerateSeries : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, std::string reason)
      : Error(field + ": " + reason), field_(std::move(field)), reason_(std::move(reason)) {}
  const std::string& field() const { return field_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string field_;
  std::string reason_;
};

/// I/O failure with the offending path attached.
class IoError : public Error {
 public:
  IoError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace tms
