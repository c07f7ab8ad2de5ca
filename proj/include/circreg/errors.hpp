#pragma once

#include <stdexcept>
#include <string>

namespace circreg {

// Base class for every failure raised by this library. Subclasses identify
// the specific degenerate condition so callers can react (or map to exit
// codes) without parsing messages.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid caller input: non-finite values, bad sizes, inconsistent kinds.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

// Resultant vector of an angle set is (numerically) zero; the mean
// direction is undefined.
class ZeroResultantError : public Error {
public:
    using Error::Error;
};

// Local weighted least-squares system is numerically singular, typically
// because the concentration is too large for the local data density.
class SingularFitError : public Error {
public:
    using Error::Error;
};

// Every local weight underflowed to zero; no effective data near the
// evaluation point.
class AllZeroWeightsError : public Error {
public:
    using Error::Error;
};

class TooFewObservationsError : public Error {
public:
    using Error::Error;
};

// Every grid value failed during cross-validation.
class CvFailureError : public Error {
public:
    using Error::Error;
};

// Nearest-neighbor distance degenerated to zero on tied data.
class ZeroDistanceError : public Error {
public:
    using Error::Error;
};

// Residual sum (quadratic or circular) is numerically zero; the test
// statistic denominator is undefined.
class DegenerateResidualsError : public Error {
public:
    using Error::Error;
};

// Cumulant matching for the shifted-scaled chi-square failed (nu2 <= 0 or
// nu3 == 0).
class DegenerateCumulantsError : public Error {
public:
    using Error::Error;
};

// Pooled variance estimate is numerically zero.
class DegenerateVarianceError : public Error {
public:
    using Error::Error;
};

// The shift-parameter normal equations are singular.
class SingularShiftSystemError : public Error {
public:
    using Error::Error;
};

// Two design points coincide where strictly increasing sorted angles are
// required (periodic pseudoresiduals).
class DuplicatePredictorsError : public Error {
public:
    using Error::Error;
};

// Malformed input file; the message carries the line number.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace circreg
