#pragma once

#include <stdexcept>
#include <string>

namespace firenze {

// Base class for all errors thrown by this library.  Callers that only want
// a broad catch can use this; the subclasses distinguish the failure modes
// that tests and the CLI care about.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// A name (sample id, marker name, ...) was not found where it must exist.
class lookup_error : public error {
public:
    explicit lookup_error(const std::string& msg) : error(msg) {}
};

// An argument is outside the mathematically valid range (empty input where
// values are required, k larger than the population allows, probability
// outside [0,1], ...).
class domain_error : public error {
public:
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// A value violates a structural precondition (non-finite score, verdict
// outside {-1,0,1}, mismatched sample universes, ...).
class validation_error : public error {
public:
    explicit validation_error(const std::string& msg) : error(msg) {}
};

// Malformed input data: bad CSV/JSONL rows, duplicate keys, unknown config
// keys.  Messages carry file/line context where available.
class format_error : public error {
public:
    explicit format_error(const std::string& msg) : error(msg) {}
};

} // namespace firenze
