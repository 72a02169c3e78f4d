#pragma once

#include <stdexcept>
#include <string>

namespace vinsp {

/// Failure classes surfaced to callers; the CLI maps each to an exit status.
enum class ErrorKind { Config, Io, Data, Oracle };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Error config_error(const std::string& what) { return {ErrorKind::Config, what}; }
inline Error io_error(const std::string& what) { return {ErrorKind::Io, what}; }
inline Error data_error(const std::string& what) { return {ErrorKind::Data, what}; }
inline Error oracle_error(const std::string& what) { return {ErrorKind::Oracle, what}; }

const char* to_string(ErrorKind kind) noexcept;

}  // namespace vinsp
