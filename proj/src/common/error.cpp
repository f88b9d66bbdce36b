#include "expectq/error.hpp"

namespace expectq {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::Io: return "Io";
        case Errc::ConfigError: return "ConfigError";
        case Errc::MissingField: return "MissingField";
        case Errc::DuplicateCallId: return "DuplicateCallId";
        case Errc::UnparseableDate: return "UnparseableDate";
        case Errc::EmptyTranscript: return "EmptyTranscript";
        case Errc::ParseError: return "ParseError";
        case Errc::TransportError: return "TransportError";
        case Errc::ProviderRefusal: return "ProviderRefusal";
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::NonConsecutiveQuarters: return "NonConsecutiveQuarters";
        case Errc::ZeroCapital: return "ZeroCapital";
        case Errc::JoinKeyCollision: return "JoinKeyCollision";
        case Errc::MissingInput: return "MissingInput";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::RankDeficient: return "RankDeficient";
        case Errc::TooFewClusters: return "TooFewClusters";
        case Errc::IdentificationError: return "IdentificationError";
        case Errc::ZeroVariance: return "ZeroVariance";
        case Errc::Unsupported: return "Unsupported";
        case Errc::InsufficientHistory: return "InsufficientHistory";
        case Errc::MissingWindowDay: return "MissingWindowDay";
        case Errc::IncompleteQuarter: return "IncompleteQuarter";
        case Errc::NonpositivePrice: return "NonpositivePrice";
        case Errc::NonpositiveCapex: return "NonpositiveCapex";
        case Errc::NonpositiveValue: return "NonpositiveValue";
        case Errc::NonpositiveQ: return "NonpositiveQ";
    }
    return "Unknown";
}

}  // namespace expectq
