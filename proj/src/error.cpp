#include "calcrad/error.hpp"

namespace calcrad {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::UnsupportedDatatype: return "UnsupportedDatatype";
        case ErrorCode::TruncatedFile: return "TruncatedFile";
        case ErrorCode::NonPositiveSpacing: return "NonPositiveSpacing";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::DuplicateSubject: return "DuplicateSubject";
        case ErrorCode::MissingFile: return "MissingFile";
        case ErrorCode::BadLabel: return "BadLabel";
        case ErrorCode::BadCsv: return "BadCsv";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::EmptyRoi: return "EmptyRoi";
        case ErrorCode::NonPositiveWidth: return "NonPositiveWidth";
        case ErrorCode::BadRange: return "BadRange";
        case ErrorCode::BadSpacing: return "BadSpacing";
        case ErrorCode::EmptyMask: return "EmptyMask";
        case ErrorCode::DegenerateMatrix: return "DegenerateMatrix";
        case ErrorCode::TooFewRows: return "TooFewRows";
        case ErrorCode::UnknownColumn: return "UnknownColumn";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::TooFewPerClass: return "TooFewPerClass";
        case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::InvalidHyperparameter: return "InvalidHyperparameter";
        case ErrorCode::EmptyCounts: return "EmptyCounts";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::TooFewPairs: return "TooFewPairs";
        case ErrorCode::RaggedRow: return "RaggedRow";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::EmptyList: return "EmptyList";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::EmptyCohort: return "EmptyCohort";
    }
    return "Unknown";
}

}  // namespace calcrad
