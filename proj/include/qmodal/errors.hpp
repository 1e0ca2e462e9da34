#pragma once

#include <stdexcept>
#include <string>

namespace qmodal {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define QMODAL_DEFINE_ERROR(Name)                                              \
    struct Name : Error {                                                      \
        explicit Name(const std::string& what) : Error(what) {}                \
    }

// matrix kernel
QMODAL_DEFINE_ERROR(NotSquare);
QMODAL_DEFINE_ERROR(NotHermitian);
QMODAL_DEFINE_ERROR(DimensionMismatch);
QMODAL_DEFINE_ERROR(RankDeficient);
QMODAL_DEFINE_ERROR(NotUnitary);

// contexts and observables
QMODAL_DEFINE_ERROR(DegenerateSpectrum);
QMODAL_DEFINE_ERROR(DegenerateJointSpectrum);
QMODAL_DEFINE_ERROR(NotCommuting);
QMODAL_DEFINE_ERROR(EmptyInput);
QMODAL_DEFINE_ERROR(UnknownContext);
QMODAL_DEFINE_ERROR(IndexOutOfRange);
QMODAL_DEFINE_ERROR(LengthMismatch);
QMODAL_DEFINE_ERROR(BadDimension);

// stochastic fits and sampling
QMODAL_DEFINE_ERROR(InvalidTarget);
QMODAL_DEFINE_ERROR(InvalidDistribution);

// group representations
QMODAL_DEFINE_ERROR(NotHalfInteger);
QMODAL_DEFINE_ERROR(TooLarge);
QMODAL_DEFINE_ERROR(BadAxis);

// serialization
QMODAL_DEFINE_ERROR(ParseError);

#undef QMODAL_DEFINE_ERROR

}  // namespace qmodal
