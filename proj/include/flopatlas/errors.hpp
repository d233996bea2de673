#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace flopatlas {

// Every domain failure carries a stable name (e.g. "SingularMatrix") so the
// CLI can surface it verbatim.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& detail)
        : std::runtime_error(name + (detail.empty() ? "" : ": " + detail)),
          name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define FLOPATLAS_ERROR(Type)                                              \
    struct Type : Error {                                                  \
        explicit Type(const std::string& detail = {}) : Error(#Type, detail) {} \
    }

FLOPATLAS_ERROR(SingularMatrix);
FLOPATLAS_ERROR(DimensionMismatch);
FLOPATLAS_ERROR(InvalidType);
FLOPATLAS_ERROR(NotAnAutomorphism);
FLOPATLAS_ERROR(EmptyCone);
FLOPATLAS_ERROR(ScaleLimit);
FLOPATLAS_ERROR(InvalidBeta);
FLOPATLAS_ERROR(DegenerateWalk);
FLOPATLAS_ERROR(NoFlopTarget);
FLOPATLAS_ERROR(AmbiguousFlopTarget);
FLOPATLAS_ERROR(InconsistentClasses);
FLOPATLAS_ERROR(NotAFloppingClass);
FLOPATLAS_ERROR(FixtureParse);
FLOPATLAS_ERROR(NotSimplicial);
FLOPATLAS_ERROR(NoUnimodularTriangulation);
FLOPATLAS_ERROR(NotASubgroup);
FLOPATLAS_ERROR(InvalidGroupTable);

#undef FLOPATLAS_ERROR

} // namespace flopatlas
