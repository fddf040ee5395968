#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace msc {

/// Base class for all validation and construction failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- metric space validation -------------------------------------------

struct TriangleViolation : Error {
  std::string a, b, c;
  TriangleViolation(std::string a_, std::string b_, std::string c_)
      : Error("triangle inequality violated by (" + a_ + "," + b_ + "," + c_ + ")"),
        a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {}
};

struct AsymmetricDistance : Error {
  AsymmetricDistance(const std::string& a, const std::string& b)
      : Error("asymmetric distance between " + a + " and " + b) {}
};

struct NonpositiveWeight : Error {
  explicit NonpositiveWeight(const std::string& p)
      : Error("nonpositive weight at " + p) {}
};

struct ZeroDistanceDistinctPoints : Error {
  ZeroDistanceDistinctPoints(const std::string& a, const std::string& b)
      : Error("zero distance between distinct points " + a + " and " + b) {}
};

struct InvalidSpace : Error {
  using Error::Error;
};

struct NotLipschitzOnSubset : Error {
  using Error::Error;
};

// --- module category ----------------------------------------------------

struct BaseMismatch : Error {
  using Error::Error;
};

struct NotASuperset : Error {
  using Error::Error;
};

struct AbsoluteContinuityViolation : Error {
  std::vector<std::string> offending;
  explicit AbsoluteContinuityViolation(std::vector<std::string> xs)
      : Error("pushforward not absolutely continuous; first offending point: " +
              (xs.empty() ? std::string("?") : xs.front())),
        offending(std::move(xs)) {}
};

struct BoundViolated : Error {
  using Error::Error;
};

struct GeneratorsDoNotSpan : Error {
  using Error::Error;
};

struct InconsistentImages : Error {
  using Error::Error;
};

struct NotDirected : Error {
  using Error::Error;
};

struct CompositionLawViolated : Error {
  using Error::Error;
};

struct ConjugacyViolated : Error {
  using Error::Error;
};

struct NotNested : Error {
  using Error::Error;
};

// --- differential consistency checks -------------------------------------

struct DominationFailure : Error {
  using Error::Error;
};

struct TargetNotScalar : Error {
  using Error::Error;
};

struct NotACover : Error {
  using Error::Error;
};

struct OutOfDomain : Error {
  using Error::Error;
};

}  // namespace msc
