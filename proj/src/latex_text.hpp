#pragma once

// Minimal LaTeX source scanning shared by the source transforms and the
// box-markup injector. Only what those edits need: locating control words
// outside comments.

#include <cstddef>
#include <string_view>
#include <vector>

namespace scanfig::latex {

// Byte offsets of every occurrence of the control word `name` (including the
// backslash) that is not inside a % comment and is not a prefix of a longer
// control word.
std::vector<std::size_t> find_control_word(std::string_view source, std::string_view name);

// Offset of the first uncommented "\begin{document}", or npos.
std::size_t find_begin_document(std::string_view source);

// True when `line` occurs in `source` as a whole line (ignoring surrounding
// whitespace).
bool contains_line(std::string_view source, std::string_view line);

}  // namespace scanfig::latex
