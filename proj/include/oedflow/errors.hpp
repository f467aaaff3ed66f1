#pragma once

#include <stdexcept>
#include <string>

namespace oedflow {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The information matrix is rank deficient or too ill-conditioned to factor.
class SingularInformationMatrix : public Error {
 public:
  using Error::Error;
};

/// A coordinate became NaN or infinite, usually from an oversized time step.
class NonFiniteCoordinate : public Error {
 public:
  using Error::Error;
};

/// A single flow step moved some particle further than the configured limit.
class ExcessiveStep : public Error {
 public:
  using Error::Error;
};

class AsymmetricPerturbation : public Error {
 public:
  using Error::Error;
};

class NonPositiveMedia : public Error {
 public:
  using Error::Error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

class UnknownPreset : public Error {
 public:
  using Error::Error;
};

class RankDeficientCandidates : public Error {
 public:
  using Error::Error;
};

class InvalidL : public Error {
 public:
  using Error::Error;
};

class SizeMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidInit : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace oedflow
