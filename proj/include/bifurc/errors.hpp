#pragma once

#include <stdexcept>
#include <string>

namespace bifurc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define BIFURC_ERROR(Name)                  \
    class Name : public Error {             \
    public:                                 \
        using Error::Error;                 \
    }

BIFURC_ERROR(InvalidParams);
BIFURC_ERROR(DomainError);
BIFURC_ERROR(ParseError);
BIFURC_ERROR(ModelInconsistency);
BIFURC_ERROR(ConstantCorankViolation);
BIFURC_ERROR(NontrivialBundle);
BIFURC_ERROR(OutsideValidity);
BIFURC_ERROR(FlatComponent);
BIFURC_ERROR(VariantMismatch);
BIFURC_ERROR(UnsupportedDimension);
BIFURC_ERROR(NoBranch);
BIFURC_ERROR(QuadraticCaseViolation);
BIFURC_ERROR(DegeneracyCheckFailure);

#undef BIFURC_ERROR

}  // namespace bifurc
