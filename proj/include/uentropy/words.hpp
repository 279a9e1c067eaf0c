#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace uent {

using Symbol = std::uint8_t;

// Finite string over {0..k-1}. Symbolic points are represented by finite
// words; every operation that looks ahead n symbols requires enough length.
using Word = std::vector<Symbol>;

inline constexpr std::size_t kNoDisagreement = std::numeric_limits<std::size_t>::max();

// Index of the first differing symbol. Words that agree over the common
// length are treated as the same cylinder point when lengths match; a strict
// prefix counts as diverging right after the overlap.
std::size_t first_disagreement(const Word& a, const Word& b);

Word word_from_string(const std::string& s);
std::string word_to_string(const Word& w);

bool lex_less(const Word& a, const Word& b);

}  // namespace uent
