#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace nauticle {

/// Diagnostic class of a failure, mirrored by the CLI exit message.
enum class ErrorKind { Parse, Assembly, Runtime, Nan, Io };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    const char* kind_name() const {
        switch (kind_) {
            case ErrorKind::Parse: return "parse error";
            case ErrorKind::Assembly: return "assembly error";
            case ErrorKind::Runtime: return "runtime error";
            case ErrorKind::Nan: return "runtime NaN";
            case ErrorKind::Io: return "I/O error";
        }
        return "error";
    }

private:
    ErrorKind kind_;
};

namespace detail {
inline void format_into(std::ostringstream&) {}
template <typename T, typename... Rest>
void format_into(std::ostringstream& os, const T& head, const Rest&... rest) {
    os << head;
    format_into(os, rest...);
}
}  // namespace detail

template <typename... Parts>
Error make_error(ErrorKind kind, const Parts&... parts) {
    std::ostringstream os;
    detail::format_into(os, parts...);
    return Error(kind, os.str());
}

template <typename... Parts>
Error parse_error(const Parts&... parts) {
    return make_error(ErrorKind::Parse, parts...);
}
template <typename... Parts>
Error assembly_error(const Parts&... parts) {
    return make_error(ErrorKind::Assembly, parts...);
}
template <typename... Parts>
Error runtime_error(const Parts&... parts) {
    return make_error(ErrorKind::Runtime, parts...);
}
template <typename... Parts>
Error nan_error(const Parts&... parts) {
    return make_error(ErrorKind::Nan, parts...);
}
template <typename... Parts>
Error io_error(const Parts&... parts) {
    return make_error(ErrorKind::Io, parts...);
}

}  // namespace nauticle
