#pragma once

#include <stdexcept>
#include <string>

namespace texdiff {

/// Base class for every error raised by the library. The CLI maps the
/// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Usage / configuration errors (exit code 1).
class ParameterError : public Error { using Error::Error; };
class ShapeError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class StratificationError : public Error { using Error::Error; };
class AlignmentError : public Error { using Error::Error; };

// I/O errors (exit code 2).
class IoError : public Error { using Error::Error; };
class DecodeError : public IoError { using IoError::IoError; };
class FormatError : public IoError { using IoError::IoError; };
class IngestionError : public IoError { using IoError::IoError; };

// Non-finite values detected mid-pipeline (exit code 3).
class NumericalError : public Error { using Error::Error; };

/// Process exit code for an error: 1 usage, 2 I/O, 3 numerical.
inline int exit_code_for(const std::exception& e) noexcept {
    if (dynamic_cast<const NumericalError*>(&e)) return 3;
    if (dynamic_cast<const IoError*>(&e)) return 2;
    if (dynamic_cast<const Error*>(&e)) return 1;
    return 2;
}

} // namespace texdiff
