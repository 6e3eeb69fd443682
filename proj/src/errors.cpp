#include "fss/errors.hpp"

namespace fss {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NoEmployment: return "NoEmployment";
        case Errc::UnknownSalaryKey: return "UnknownSalaryKey";
        case Errc::MissingBaseline: return "MissingBaseline";
        case Errc::InvalidSlot: return "InvalidSlot";
        case Errc::MissingSdsBaseline: return "MissingSdsBaseline";
        case Errc::EmptyStaff: return "EmptyStaff";
        case Errc::EmptyCohort: return "EmptyCohort";
        case Errc::UnknownRule: return "UnknownRule";
        case Errc::MissingFile: return "MissingFile";
        case Errc::SchemaError: return "SchemaError";
        case Errc::DanglingReference: return "DanglingReference";
        case Errc::InfeasibleProfile: return "InfeasibleProfile";
        case Errc::ConfigError: return "ConfigError";
        case Errc::IoError: return "IoError";
    }
    return "Error";
}

} // namespace fss
