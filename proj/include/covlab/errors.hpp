#pragma once

#include <stdexcept>
#include <string>

namespace covlab {

/// Base of every error raised by the library. Each subclass names one
/// failed precondition so callers can dispatch on type.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

#define COVLAB_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                                \
      public:                                                                  \
        using Error::Error;                                                    \
    }

COVLAB_DEFINE_ERROR(NotPsd);
COVLAB_DEFINE_ERROR(NotPd);
COVLAB_DEFINE_ERROR(NotUnit);
COVLAB_DEFINE_ERROR(NotSymmetric);
COVLAB_DEFINE_ERROR(DimensionMismatch);
COVLAB_DEFINE_ERROR(BasisNotOrthonormal);
COVLAB_DEFINE_ERROR(DegenerateDraw);
COVLAB_DEFINE_ERROR(IndexOutOfRange);
COVLAB_DEFINE_ERROR(SingularBlock);
COVLAB_DEFINE_ERROR(TooFewAcceptances);
COVLAB_DEFINE_ERROR(InvalidParams);
COVLAB_DEFINE_ERROR(ThetaInEPerp);
COVLAB_DEFINE_ERROR(UnknownDetector);

#undef COVLAB_DEFINE_ERROR

/// Matrix-file syntax error, carrying a 1-based position.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace covlab
