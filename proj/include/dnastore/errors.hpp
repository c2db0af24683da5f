#ifndef DNASTORE_ERRORS_HPP
#define DNASTORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dnastore {

enum class ErrorCode {
    invalid_argument,   // bad parameter / configuration
    bounds,             // block, version or level out of range
    malformed_payload,  // payload violates a structural precondition
    io,                 // file could not be read or written
    parse,              // file content did not match the documented format
    decode_failure,     // recovery impossible (coverage or ECC bound exceeded)
    patch,              // patch violates the block's bounds
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace dnastore

#endif
