#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace entsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value lies outside the domain an operation accepts (bad coordinate,
/// empty trajectory, unknown region id).
class InputDomainError : public Error {
 public:
  using Error::Error;
};

/// A document is structurally malformed (missing keys, duplicate ids,
/// malformed CSV rows).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Polygon geometry violates a ring invariant.
class GeometryError : public SchemaError {
 public:
  using SchemaError::SchemaError;
};

/// Real and synthetic trajectories could not be matched by id.
class PairingError : public Error {
 public:
  PairingError(std::vector<std::string> orphans_real,
               std::vector<std::string> orphans_synthetic)
      : Error(describe(orphans_real, orphans_synthetic)),
        orphans_real_(std::move(orphans_real)),
        orphans_synthetic_(std::move(orphans_synthetic)) {}

  const std::vector<std::string>& orphans_real() const { return orphans_real_; }
  const std::vector<std::string>& orphans_synthetic() const {
    return orphans_synthetic_;
  }

 private:
  static std::string describe(const std::vector<std::string>& real,
                              const std::vector<std::string>& synth) {
    std::string msg = "unmatched trajectory ids;";
    auto append = [&msg](const char* label, const std::vector<std::string>& ids) {
      msg += ' ';
      msg += label;
      msg += ": [";
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) msg += ", ";
        msg += ids[i];
      }
      msg += ']';
    };
    append("real only", real);
    append("synthetic only", synth);
    return msg;
  }

  std::vector<std::string> orphans_real_;
  std::vector<std::string> orphans_synthetic_;
};

}  // namespace entsim
