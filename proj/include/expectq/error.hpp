#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace expectq {

enum class Errc {
    InvalidArgument,
    Io,
    ConfigError,
    // corpus
    MissingField,
    DuplicateCallId,
    UnparseableDate,
    EmptyTranscript,
    // scoring
    ParseError,
    TransportError,
    ProviderRefusal,
    EmptyInput,
    // fundamentals
    NonConsecutiveQuarters,
    ZeroCapital,
    JoinKeyCollision,
    MissingInput,
    // econometrics
    NoConvergence,
    RankDeficient,
    TooFewClusters,
    IdentificationError,
    ZeroVariance,
    Unsupported,
    // events
    InsufficientHistory,
    MissingWindowDay,
    IncompleteQuarter,
    NonpositivePrice,
    NonpositiveCapex,
    // qmodel
    NonpositiveValue,
    NonpositiveQ,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace expectq
