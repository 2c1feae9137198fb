#include "generec/instruction.hpp"

#include "generec/editor.hpp"
#include "generec/error.hpp"
#include "generec/types.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace generec {
namespace {

struct Token {
    std::string_view text;
    std::size_t offset;
    std::size_t end() const { return offset + text.size(); }
};

std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == text.size()) break;
        const std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        tokens.push_back({text.substr(start, i - start), start});
    }
    return tokens;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    return out;
}

bool keyword(const Token& t, std::string_view kw)
{
    return lower(t.text) == kw;
}

class Cursor {
public:
    explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    bool done() const { return pos_ == tokens_.size(); }

    // Returns the next token or raises MissingArgument just past the previous one.
    const Token& expect()
    {
        if (done()) throw ParseError(ParseErrorKind::missing_argument, "", tokens_.empty() ? 0 : tokens_.back().end());
        return tokens_[pos_++];
    }

    const Token& peek() const { return tokens_[pos_]; }
    void advance() { ++pos_; }

    void finish() const
    {
        if (!done()) throw ParseError(ParseErrorKind::trailing_input, std::string(peek().text), peek().offset);
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

std::string style_name(const Token& t)
{
    auto name = lower(t.text);
    if (!is_registered_style(name)) throw ParseError(ParseErrorKind::unknown_style, std::string(t.text), t.offset);
    return name;
}

}  // namespace

Instruction parse_instruction(std::string_view text)
{
    Cursor cur(tokenize(text));
    if (cur.done()) return NoInstruction{};

    const Token& head = cur.expect();
    if (keyword(head, "generate")) {
        const Token& next = cur.expect();
        if (!keyword(next, "new")) throw ParseError(ParseErrorKind::unknown_command, std::string(next.text), next.offset);
        cur.finish();
        return GenerateNew{};
    }
    if (keyword(head, "edit")) {
        const Token& id = cur.expect();
        if (!is_valid_id(id.text)) throw ParseError(ParseErrorKind::invalid_argument, std::string(id.text), id.offset);
        EditInstruction edit{std::string(id.text), std::nullopt};
        if (!cur.done()) {
            const Token& kw = cur.expect();
            if (!keyword(kw, "style")) throw ParseError(ParseErrorKind::trailing_input, std::string(kw.text), kw.offset);
            edit.style = style_name(cur.expect());
        }
        cur.finish();
        return edit;
    }
    if (keyword(head, "style")) {
        StyleInstruction style{style_name(cur.expect())};
        cur.finish();
        return style;
    }
    if (keyword(head, "reset")) {
        cur.finish();
        return ResetInstruction{};
    }
    throw ParseError(ParseErrorKind::unknown_command, std::string(head.text), head.offset);
}

std::string to_text(const Instruction& instruction)
{
    struct Printer {
        std::string operator()(const NoInstruction&) const { return ""; }
        std::string operator()(const GenerateNew&) const { return "GENERATE NEW"; }
        std::string operator()(const EditInstruction& e) const
        {
            return "EDIT " + e.item_id + (e.style ? " STYLE " + *e.style : "");
        }
        std::string operator()(const StyleInstruction& s) const { return "STYLE " + s.name; }
        std::string operator()(const ResetInstruction&) const { return "RESET"; }
    };
    return std::visit(Printer{}, instruction);
}

}  // namespace generec
