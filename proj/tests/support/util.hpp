#pragma once

#include <string>

#include "fog/text.hpp"

namespace fogtest {

/// Parses a document; the tests write grammars inline.
inline fog::Document doc(const std::string& text) { return fog::parse_document(text); }

inline fog::TermGraph term(const fog::Document& d, const std::string& expr) { return fog::parse_term(expr, d); }

inline fog::Word word(const fog::Document& d, const std::string& w) { return fog::parse_word(w, d.grammar); }

}  // namespace fogtest
