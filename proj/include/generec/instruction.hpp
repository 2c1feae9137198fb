#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace generec {

// Instruction DSL (keywords case-insensitive, whitespace-tolerant):
//   GENERATE NEW | EDIT <id> [STYLE <name>] | STYLE <name> | RESET | <empty>

struct NoInstruction {
    bool operator==(const NoInstruction&) const = default;
};
struct GenerateNew {
    bool operator==(const GenerateNew&) const = default;
};
struct EditInstruction {
    std::string item_id;
    std::optional<std::string> style;
    bool operator==(const EditInstruction&) const = default;
};
struct StyleInstruction {
    std::string name;
    bool operator==(const StyleInstruction&) const = default;
};
struct ResetInstruction {
    bool operator==(const ResetInstruction&) const = default;
};

using Instruction = std::variant<NoInstruction, GenerateNew, EditInstruction, StyleInstruction, ResetInstruction>;

/// Throws ParseError carrying the offending token and its byte offset.
Instruction parse_instruction(std::string_view text);

/// Canonical text form; parse_instruction(to_text(x)) == x.
std::string to_text(const Instruction& instruction);

}  // namespace generec
