#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fog/grammar.hpp"

namespace fog {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& message() const { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

using TermPair = std::pair<TermGraph, TermGraph>;

/// A parsed grammar file: declarations, rules, named terms and term pairs.
///
///   nonterminals: X/2, Y/0
///   actions: a, b
///   X(x1,x2) -a-> Y
///   term T = X(T, Y)
///   pair (X(x1,x2), x1)
struct Document {
    struct Line {
        std::size_t number = 0;
        std::string text;
    };

    Grammar grammar;
    std::vector<std::string> term_order;
    std::map<std::string, TermGraph> terms;
    std::vector<TermPair> pairs;
    /// Lines not understood by the grammar parser, kept when allow_extra is set.
    std::vector<Line> extra;

    const TermGraph& term(const std::string& name) const;
};

Document parse_document(std::string_view text, bool allow_extra = false);
Document read_document(const std::string& path, bool allow_extra = false);
std::string read_file(const std::string& path);

/// Parses a term expression; identifiers may name terms of `doc`.
TermGraph parse_term(std::string_view expr, const Document& doc);

/// Single-line expression; nodes with several parents or on cycles are
/// written as references `name.k` whose definitions are appended to `defs`.
std::string format_term(const TermGraph& t, const Signature& sig, const std::string& name,
                        std::vector<std::pair<std::string, std::string>>& defs);
/// `term name = ...` line plus helper definitions.
std::string format_term_definition(const std::string& name, const TermGraph& t, const Signature& sig);
/// Inline tree form; only for finite terms.
std::string format_tree(const TermGraph& t, const Signature& sig);

std::string format_grammar(const Grammar& g);
std::string format_rule(const Grammar& g, const Rule& rule);

enum class WordStyle { human, machine };

/// `eps` for the empty word; machine style joins with '.', human style
/// concatenates when every action name is a single character.
std::string format_word(const Word& w, const Grammar& g, WordStyle style = WordStyle::machine);
/// Inverse of format_word for either style.
Word parse_word(std::string_view text, const Grammar& g);

bool is_identifier(std::string_view s);
bool is_variable_name(std::string_view s);

}  // namespace fog
