#pragma once

#include <stdexcept>
#include <string>

namespace subcycle {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class StabilityViolation : public Error {
 public:
  using Error::Error;
};

class CflViolation : public StabilityViolation {
 public:
  using StabilityViolation::StabilityViolation;
};

class NotStochasticForm : public Error {
 public:
  using Error::Error;
};

class DegenerateSlope : public Error {
 public:
  using Error::Error;
};

/// Raised by the exact nonlinear solution on the finite-time nonexistence branch.
class BlowUp : public Error {
 public:
  using Error::Error;
};

/// Implicit nonlinear substep has no real solution.
class NoRealRoot : public Error {
 public:
  NoRealRoot(const std::string& what, double u, double v, double dt, long step = -1)
      : Error(what), u_(u), v_(v), dt_(dt), step_(step) {}
  double u() const { return u_; }
  double v() const { return v_; }
  double dt() const { return dt_; }
  long step() const { return step_; }

 private:
  double u_, v_, dt_;
  long step_;
};

class SolveFailure : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class NegativeDiscriminant : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

/// All errors sit at the rounding floor, so there is nothing to fit.
class ZeroErrorDegenerate : public DegenerateFit {
 public:
  using DegenerateFit::DegenerateFit;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace subcycle
