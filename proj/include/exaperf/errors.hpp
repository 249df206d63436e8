#pragma once

#include <stdexcept>
#include <string>

namespace exaperf {

// Configuration-file problems. `where` carries the offending key or
// file:line so CLI users can find the spot.
class ConfigError : public std::runtime_error {
public:
  enum class Kind { Parse, Unit, Validation };

  ConfigError(Kind kind, std::string where, const std::string& message)
      : std::runtime_error(where.empty() ? message : where + ": " + message),
        kind_(kind),
        where_(std::move(where)) {}

  Kind kind() const { return kind_; }
  const std::string& where() const { return where_; }

private:
  Kind kind_;
  std::string where_;
};

inline ConfigError parse_error(const std::string& where, const std::string& msg) {
  return ConfigError(ConfigError::Kind::Parse, where, msg);
}
inline ConfigError unit_error(const std::string& where, const std::string& msg) {
  return ConfigError(ConfigError::Kind::Unit, where, msg);
}
inline ConfigError validation_error(const std::string& field, const std::string& msg) {
  return ConfigError(ConfigError::Kind::Validation, field, msg);
}

// Errors raised by the model evaluators for inputs the closed forms
// cannot digest (as opposed to scenario-validation findings, which are
// returned as data by validate_scenario).
class ModelError : public std::runtime_error {
public:
  enum class Kind {
    DegenerateSeries,
    InvalidHorizon,
    MissingDoublingTime,
    InfeasibleDecomposition,
    NotACube,
    InvalidTree,
    CacheOverflow,
    InvalidRate,
    InvalidKappa,
    ZeroTraffic,
    UnknownNode,
    MissingLevels,
    MixedMethods,
  };

  ModelError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

}  // namespace exaperf
