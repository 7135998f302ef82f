#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace calcrad {

enum class ErrorCode {
    // volume-io
    BadMagic,
    UnsupportedDatatype,
    TruncatedFile,
    NonPositiveSpacing,
    IoFailure,
    DuplicateSubject,
    MissingFile,
    BadLabel,
    BadCsv,
    // preprocess / texmat / features
    DimMismatch,
    EmptyRoi,
    NonPositiveWidth,
    BadRange,
    BadSpacing,
    EmptyMask,
    DegenerateMatrix,
    // selection / learn
    TooFewRows,
    UnknownColumn,
    SingleClass,
    TooFewPerClass,
    NonFiniteFeature,
    SchemaMismatch,
    InvalidHyperparameter,
    // eval
    EmptyCounts,
    LengthMismatch,
    TooFewPairs,
    // embeddings
    RaggedRow,
    NonFiniteValue,
    EmptyList,
    // cli
    ConfigError,
    EmptyCohort,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace calcrad
