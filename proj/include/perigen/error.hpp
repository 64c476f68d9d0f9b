#pragma once

#include <stdexcept>
#include <string>

namespace perigen {

/// Base of every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A weight sequence, r-sequence or table violates its defining conditions.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// The finite proxy for m_p -> infinity (or r_j -> infinity) failed.
class DivergenceFail : public InvalidSpec {
 public:
  using InvalidSpec::InvalidSpec;
};

/// No (A, H) pair on the search grid certifies (M.2).
class CertificationFail : public InvalidSpec {
 public:
  using InvalidSpec::InvalidSpec;
};

class Overflow : public Error {
 public:
  using Error::Error;
};

class GeneratorFail : public Error {
 public:
  using Error::Error;
};

/// A precondition that is itself a classification (e.g. "net is moderate") was not met.
class HypothesisFail : public Error {
 public:
  using Error::Error;
};

class NoWitness : public Error {
 public:
  using Error::Error;
};

/// Ultrapolynomial coefficients violate the declared class bound.
class ClassFail : public Error {
 public:
  using Error::Error;
};

/// Series terms were not decreasing by the end of the evaluation horizon.
class NoConverge : public Error {
 public:
  using Error::Error;
};

class GrowthFail : public Error {
 public:
  using Error::Error;
};

class RelationFail : public Error {
 public:
  using Error::Error;
};

class MollifierFail : public Error {
 public:
  using Error::Error;
};

class DecayFail : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or descriptor.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace perigen
