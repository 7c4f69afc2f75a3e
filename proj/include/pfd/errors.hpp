#pragma once

#include <stdexcept>
#include <string>

namespace pfd {

// Input lies outside an operation's domain (value off the support, p < q, ...).
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

// A distribution or mechanism description that cannot be built.
class ConstructionError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// An experiment whose ratio denominator is zero or negative.
class DegenerateInputError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace pfd
