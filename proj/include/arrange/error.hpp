#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arrange {

enum class Errc {
    ShapeMismatch,
    CompositionNonzero,
    DuplicateMember,
    EmptyInput,
    LastMember,
    EmptyRestriction,
    SpaceMismatch,
    DegreeMismatch,
    NotAdmissible,
    RecursionDepthExceeded,
    InconsistentDecomposition,
    MissingStratumData,
    NoGeometry,
    ExplicitModeUnavailable,
    WeightViolation,
    NotComposable,
    Infeasible,
    NotRankOne,
    MissingBetti,
    InvalidArgument,
    ParseError,
    SchemaError,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// command line front end can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline std::string_view errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::CompositionNonzero: return "CompositionNonzero";
    case Errc::DuplicateMember: return "DuplicateMember";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::LastMember: return "LastMember";
    case Errc::EmptyRestriction: return "EmptyRestriction";
    case Errc::SpaceMismatch: return "SpaceMismatch";
    case Errc::DegreeMismatch: return "DegreeMismatch";
    case Errc::NotAdmissible: return "NotAdmissible";
    case Errc::RecursionDepthExceeded: return "RecursionDepthExceeded";
    case Errc::InconsistentDecomposition: return "InconsistentDecomposition";
    case Errc::MissingStratumData: return "MissingStratumData";
    case Errc::NoGeometry: return "NoGeometry";
    case Errc::ExplicitModeUnavailable: return "ExplicitModeUnavailable";
    case Errc::WeightViolation: return "WeightViolation";
    case Errc::NotComposable: return "NotComposable";
    case Errc::Infeasible: return "Infeasible";
    case Errc::NotRankOne: return "NotRankOne";
    case Errc::MissingBetti: return "MissingBetti";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
    case Errc::SchemaError: return "SchemaError";
    }
    return "Unknown";
}

} // namespace arrange
