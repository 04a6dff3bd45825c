#pragma once

#include <stdexcept>
#include <string>

namespace wfs {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define WFS_DEFINE_ERROR(Name)                    \
    class Name : public Error {                   \
    public:                                       \
        using Error::Error;                       \
    }

WFS_DEFINE_ERROR(ConfigError);
WFS_DEFINE_ERROR(TruncationError);
WFS_DEFINE_ERROR(ExtrapolationError);
WFS_DEFINE_ERROR(SingularGenerator);
WFS_DEFINE_ERROR(TooManyPoints);
WFS_DEFINE_ERROR(Unsupported);
WFS_DEFINE_ERROR(QuadratureError);
WFS_DEFINE_ERROR(GeometryError);
WFS_DEFINE_ERROR(SupportError);
WFS_DEFINE_ERROR(InsufficientData);
WFS_DEFINE_ERROR(EmptyCone);
WFS_DEFINE_ERROR(DepthError);
WFS_DEFINE_ERROR(NotModerate);

#undef WFS_DEFINE_ERROR

// Separation failures carry the offending dual vector.
class SeparationError : public Error {
public:
    SeparationError(const std::string& what, std::string witness)
        : Error(what), witness_(std::move(witness)) {}
    const std::string& witness() const noexcept { return witness_; }

private:
    std::string witness_;
};

}  // namespace wfs
