#ifndef MDW_ERRORS_HPP
#define MDW_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mdw {

/// A parameter constraint was violated; what() names the inequality.
class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of an operation (bad index, bad window, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested accuracy cannot be certified within the work budget.
class UnreachablePrecision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The case-2 bracket is too narrow at this horizon to host a valid construction.
class BracketEmpty : public std::runtime_error {
 public:
  BracketEmpty(const std::string& what, std::uint64_t minimal_n)
      : std::runtime_error(what), minimal_n_(minimal_n) {}
  /// Smallest horizon at which the construction validates (0 if none was found).
  std::uint64_t minimal_n() const noexcept { return minimal_n_; }

 private:
  std::uint64_t minimal_n_;
};

}  // namespace mdw

#endif  // MDW_ERRORS_HPP
