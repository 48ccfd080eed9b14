#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace gralap::text {

/// Lowercases and splits on runs of non-alphanumeric characters.
std::vector<std::string> tokenize(std::string_view text);

/// Porter (1980) suffix stripping of a single lowercase word.
std::string porter_stem(std::string_view word);

/// tokenize() followed by porter_stem() on every token.
std::vector<std::string> tokenize_and_stem(std::string_view text);

/// Sparse term-count vector over stemmed tokens. Entries are always > 0.
using TermVector = std::map<std::string, int>;

TermVector term_vector(std::string_view text);

/// Accumulates the stemmed terms of `text` into `acc`.
void add_terms(TermVector& acc, std::string_view text);

/// dot(a,b) / (|a||b|); 0 when either vector is empty.
double cosine_similarity(const TermVector& a, const TermVector& b);

} // namespace gralap::text
