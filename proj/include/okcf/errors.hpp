#pragma once

#include <stdexcept>
#include <string>

namespace okcf {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// A certified decision could not be made at the working precision
// (interval overlap on a comparison, undecidable Voronoi tie, ...).
class precision_error : public error {
public:
    explicit precision_error(const std::string& what) : error(what) {}
};

// Division where the denominator interval contains zero.
class near_zero_error : public error {
public:
    explicit near_zero_error(const std::string& what) : error(what) {}
};

class index_error : public error {
public:
    explicit index_error(const std::string& what) : error(what) {}
};

class not_coprime_error : public error {
public:
    explicit not_coprime_error(const std::string& what) : error(what) {}
};

class unsupported_ring_error : public error {
public:
    explicit unsupported_ring_error(const std::string& what) : error(what) {}
};

class insufficient_data_error : public error {
public:
    explicit insufficient_data_error(const std::string& what) : error(what) {}
};

class budget_error : public error {
public:
    explicit budget_error(const std::string& what) : error(what) {}
};

class config_error : public error {
public:
    explicit config_error(const std::string& what) : error(what) {}
};

} // namespace okcf
