#include "generec/error.hpp"

namespace generec {

const char* to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::bad_magic: return "BadMagic";
    case ErrorCode::version_mismatch: return "VersionMismatch";
    case ErrorCode::truncated_file: return "TruncatedFile";
    case ErrorCode::dangling_reference: return "DanglingReference";
    case ErrorCode::invalid_data: return "InvalidData";
    case ErrorCode::io: return "IoError";
    case ErrorCode::config: return "ConfigError";
    case ErrorCode::parse: return "ParseError";
    case ErrorCode::no_positive_history: return "NoPositiveHistory";
    case ErrorCode::unknown_source_item: return "UnknownSourceItem";
    case ErrorCode::video_too_short: return "VideoTooShort";
    case ErrorCode::unknown_style: return "UnknownStyle";
    case ErrorCode::not_pixel_interpretable: return "NotPixelInterpretable";
    case ErrorCode::already_watermarked: return "AlreadyWatermarked";
    case ErrorCode::zero_norm_embedding: return "ZeroNormEmbedding";
    case ErrorCode::insufficient_data: return "InsufficientData";
    case ErrorCode::unknown_user: return "UnknownUser";
    case ErrorCode::too_few_samples: return "TooFewSamples";
    case ErrorCode::empty_candidate_set: return "EmptyCandidateSet";
    case ErrorCode::unserved_item: return "UnservedItem";
    case ErrorCode::missing_scorer: return "MissingScorer";
    case ErrorCode::not_found: return "NotFound";
    }
    return "Unknown";
}

const char* to_string(ParseErrorKind kind) noexcept
{
    switch (kind) {
    case ParseErrorKind::unknown_command: return "UnknownCommand";
    case ParseErrorKind::missing_argument: return "MissingArgument";
    case ParseErrorKind::unknown_style: return "UnknownStyle";
    case ParseErrorKind::invalid_argument: return "InvalidArgument";
    case ParseErrorKind::trailing_input: return "TrailingInput";
    }
    return "Unknown";
}

ParseError::ParseError(ParseErrorKind kind, std::string token, std::size_t offset)
    : Error(ErrorCode::parse,
            std::string(to_string(kind)) + " at offset " + std::to_string(offset) +
                (token.empty() ? std::string() : " near '" + token + "'")),
      kind_(kind), token_(std::move(token)), offset_(offset)
{
}

}  // namespace generec
