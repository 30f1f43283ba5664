#pragma once

#include <string>
#include <string_view>

#include "tw/word.hpp"

namespace tw {

/// Expression grammar:
///   expr   := 'eps' | letter | 'Mk(' atom ')' | 'Mg(' bits ')'
///           | 'seg(' expr ',' ord ')' | 'inv(' expr ')' | 'rep_w1(' expr ')'
///           | 'rep_w1_literal(' expr ')' | expr '.' expr
///   letter := 'g[' ord ']' | 'h[' ord ']' | 'elem(' ord ',' int ')'
///   bits   := '{' [ 'default=' bit ] [ ord ':' bit { ',' ord ':' bit } ] '}'
///   ord    := item { '+' item },  item := 'w' ['^' nat] ['*' nat] | nat | atom ['*' nat]
/// '.' is left-associative, whitespace insignificant.
Term parse_expr(std::string_view src, const Session& s);
Ord parse_ord(std::string_view src, const Session& s);
GDescription parse_bits(std::string_view src, const Session& s);

std::string print_letter(const Letter& l, const Session& s);
std::string print_finite_word(const FiniteWord& w, const Session& s);
std::string print_bits(const GDescription& d);
/// Prints a reduced word in expression syntax; reparsing and reducing the
/// output yields an isomorphic word.
std::string print_word(const Word& w, const Session& s);
std::string print_term(const Term& t, const Session& s);

}  // namespace tw
