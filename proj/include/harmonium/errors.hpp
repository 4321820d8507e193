#pragma once
// Exception taxonomy shared by all modules. The CLI maps these onto process
// exit codes: configuration 2, numerical failure 3, domain error 4.

#include <stdexcept>
#include <string>
#include <vector>

namespace harmonium {

// precondition violations: bad values, off-grid times, invalid quantum numbers
class argument_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// physically ill-posed regime, e.g. an unbound Moshinsky relative-motion channel
class domain_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// convergence failures, overflow, grid boundary leaks
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// configuration rejected; carries every issue found, not only the first
class config_error : public std::runtime_error {
 public:
  explicit config_error(std::vector<std::string> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string msg = "configuration rejected:";
    for (const auto& issue : issues) {
      msg += "\n  - ";
      msg += issue;
    }
    return msg;
  }

  std::vector<std::string> issues_;
};

}  // namespace harmonium
