#pragma once

#include <stdexcept>
#include <string>

namespace fss {

enum class Errc {
    NoEmployment,
    UnknownSalaryKey,
    MissingBaseline,
    InvalidSlot,
    MissingSdsBaseline,
    EmptyStaff,
    EmptyCohort,
    UnknownRule,
    MissingFile,
    SchemaError,
    DanglingReference,
    InfeasibleProfile,
    ConfigError,
    IoError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

} // namespace fss
