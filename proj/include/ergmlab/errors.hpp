#pragma once

#include <stdexcept>
#include <string>

namespace ergmlab {

/// A module was called outside its domain (bad parameters, wrong regime,
/// template larger than host, ...). The CLI maps this to exit code 3.
class PreconditionError : public std::domain_error {
 public:
  explicit PreconditionError(const std::string& what) : std::domain_error(what) {}
};

/// Malformed configuration or input file. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ergmlab
