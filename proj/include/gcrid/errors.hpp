#pragma once

#include <stdexcept>
#include <string>

namespace gcrid {

// Bad invocation: missing resources, inconsistent options. CLI exit code 1.
class usage_error : public std::runtime_error {
 public:
  explicit usage_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input data (files, corpora). CLI exit code 2.
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Broken internal invariant. CLI exit code 3.
class internal_error : public std::runtime_error {
 public:
  explicit internal_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gcrid
