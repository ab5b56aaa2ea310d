#pragma once

#include <stdexcept>
#include <string>

namespace srdom {

enum class error_kind {
    invalid_spec,
    undefined_join,
    parse_error,
    invalid_decomposition,
    structural_error,
    shape_error,
    cap_exceeded,
    unsupported_spec,
};

inline const char* to_string(error_kind kind)
{
    switch (kind) {
    case error_kind::invalid_spec: return "invalid_spec";
    case error_kind::undefined_join: return "undefined_join";
    case error_kind::parse_error: return "parse_error";
    case error_kind::invalid_decomposition: return "invalid_decomposition";
    case error_kind::structural_error: return "structural_error";
    case error_kind::shape_error: return "shape_error";
    case error_kind::cap_exceeded: return "cap_exceeded";
    case error_kind::unsupported_spec: return "unsupported_spec";
    }
    return "unknown";
}

class error : public std::runtime_error {
public:
    error(error_kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind)
    {
    }

    error_kind kind() const noexcept { return kind_; }

private:
    error_kind kind_;
};

} // namespace srdom
