#pragma once

#include <stdexcept>
#include <string>

namespace qkg {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters supplied by the caller (zero photon count, probability
// out of range, even grid side, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed interaction between protocol parties (record length mismatch).
class ProtocolError : public Error {
public:
    using Error::Error;
};

// Operation invoked on an object in the wrong state (unpopulated grid).
class StateError : public Error {
public:
    using Error::Error;
};

// Not enough key material to complete the requested operation.
class UnderflowError : public Error {
public:
    using Error::Error;
};

// QBER estimation requested without a sacrificed sample.
class EstimationError : public Error {
public:
    using Error::Error;
};

// Key establishment gave up (eavesdropper detection beyond the retry budget).
class EstablishmentError : public Error {
public:
    using Error::Error;
};

// Mathematical argument outside its admissible domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// A numerical routine failed to converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Filesystem problems (missing file, unwritable directory).
class IoError : public Error {
public:
    using Error::Error;
};

// Versioned-format violations (bad magic, truncated container).
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace qkg
