#pragma once

#include <stdexcept>
#include <string>

namespace urank {

// Base error for everything thrown by this library. The message always
// starts with the originating module name ("corpus: ...", "bm25: ...").
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file (bad JSON line, truncated record, ...).
class ParseError : public Error {
public:
    using Error::Error;
};

// Well-formed input that violates a documented invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// HTTP failure that survived the retry budget.
class TransportError : public Error {
public:
    using Error::Error;
};

// Non-finite value produced where a finite one is required.
class NumericError : public Error {
public:
    using Error::Error;
};

// Replay backend asked for a prompt that is not in the transcript.
class CacheMissError : public Error {
public:
    using Error::Error;
};

}  // namespace urank
