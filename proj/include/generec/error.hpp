#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace generec {

enum class ErrorCode {
    dimension_mismatch,
    bad_magic,
    version_mismatch,
    truncated_file,
    dangling_reference,
    invalid_data,
    io,
    config,
    parse,
    no_positive_history,
    unknown_source_item,
    video_too_short,
    unknown_style,
    not_pixel_interpretable,
    already_watermarked,
    zero_norm_embedding,
    insufficient_data,
    unknown_user,
    too_few_samples,
    empty_candidate_set,
    unserved_item,
    missing_scorer,
    not_found,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

enum class ParseErrorKind { unknown_command, missing_argument, unknown_style, invalid_argument, trailing_input };

const char* to_string(ParseErrorKind kind) noexcept;

// Instruction parse failure. offset is a byte offset into the original text.
class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, std::string token, std::size_t offset);

    ParseErrorKind kind() const noexcept { return kind_; }
    const std::string& token() const noexcept { return token_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    ParseErrorKind kind_;
    std::string token_;
    std::size_t offset_;
};

}  // namespace generec
