#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace nslab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raised when a field or operation is evaluated outside its domain
/// (zero velocity, below v_min, on a pole, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Raised when an iterative numeric procedure fails to converge.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised for malformed configuration documents. `path` is a JSON pointer.
class SchemaError : public std::invalid_argument {
 public:
  SchemaError(std::string path, const std::string& what)
      : std::invalid_argument(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A point (x, v) of the tangent bundle of flat R^n.
struct PhasePoint {
  Vec x;
  Vec v;

  PhasePoint() = default;
  PhasePoint(Vec x_, Vec v_) : x(std::move(x_)), v(std::move(v_)) {}

  int dimension() const { return static_cast<int>(v.size()); }
  double speed() const { return v.norm(); }
};

}  // namespace nslab
