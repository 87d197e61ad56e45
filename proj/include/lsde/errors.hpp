#pragma once

#include <stdexcept>
#include <string>

namespace lsde {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// State outside the declared manifold, or an algebraic output outside the admissible cone.
class DomainError : public Error {
public:
    using Error::Error;
};

class NumericsError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class SingularFormError : public Error {
public:
    using Error::Error;
};

class SingularRuleError : public Error {
public:
    using Error::Error;
};

// Operation not defined for the given system (e.g. Itô conversion with driver-dependent noise).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class NoFullRank : public Error {
public:
    using Error::Error;
};

class StudyFailed : public Error {
public:
    using Error::Error;
};

class VerificationInconclusive : public Error {
public:
    using Error::Error;
};

}  // namespace lsde
