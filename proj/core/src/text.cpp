#include "gralap/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <span>

namespace gralap::text {
namespace {

bool is_consonant(const std::string& w, std::size_t i) {
    char c = w[i];
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return false;
    if (c == 'y') return i == 0 || !is_consonant(w, i - 1);
    return true;
}

// m in the [C](VC)^m[V] decomposition: the number of vowel->consonant
// run boundaries.
int measure(const std::string& stem) {
    int m = 0;
    bool prev_vowel = false;
    for (std::size_t i = 0; i < stem.size(); ++i) {
        bool cons = is_consonant(stem, i);
        if (cons && prev_vowel) ++m;
        prev_vowel = !cons;
    }
    return m;
}

bool has_vowel(const std::string& stem) {
    for (std::size_t i = 0; i < stem.size(); ++i)
        if (!is_consonant(stem, i)) return true;
    return false;
}

bool ends_double_consonant(const std::string& w) {
    std::size_t n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: ends consonant-vowel-consonant where the final consonant is not w, x, y.
bool ends_cvc(const std::string& w) {
    std::size_t n = w.size();
    if (n < 3) return false;
    char last = w[n - 1];
    return is_consonant(w, n - 3) && !is_consonant(w, n - 2) &&
           is_consonant(w, n - 1) && last != 'w' && last != 'x' && last != 'y';
}

enum class Cond { None, MPositive, MGreaterOne, MGreaterOneAndEndsST };

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
    Cond cond;
};

bool cond_holds(Cond c, const std::string& stem) {
    switch (c) {
        case Cond::None: return true;
        case Cond::MPositive: return measure(stem) > 0;
        case Cond::MGreaterOne: return measure(stem) > 1;
        case Cond::MGreaterOneAndEndsST:
            return measure(stem) > 1 && !stem.empty() &&
                   (stem.back() == 's' || stem.back() == 't');
    }
    return false;
}

// The longest matching suffix wins; only its condition is evaluated.
void apply_step(std::string& w, std::span<const Rule> rules) {
    const Rule* best = nullptr;
    for (const Rule& r : rules) {
        if (w.size() >= r.suffix.size() &&
            w.compare(w.size() - r.suffix.size(), r.suffix.size(), r.suffix) == 0) {
            if (best == nullptr || r.suffix.size() > best->suffix.size()) best = &r;
        }
    }
    if (best == nullptr) return;
    std::string stem = w.substr(0, w.size() - best->suffix.size());
    if (cond_holds(best->cond, stem)) w = stem + std::string(best->replacement);
}

constexpr Rule kStep2[] = {
    {"ational", "ate", Cond::MPositive}, {"tional", "tion", Cond::MPositive},
    {"enci", "ence", Cond::MPositive},   {"anci", "ance", Cond::MPositive},
    {"izer", "ize", Cond::MPositive},    {"abli", "able", Cond::MPositive},
    {"alli", "al", Cond::MPositive},     {"entli", "ent", Cond::MPositive},
    {"eli", "e", Cond::MPositive},       {"ousli", "ous", Cond::MPositive},
    {"ization", "ize", Cond::MPositive}, {"ation", "ate", Cond::MPositive},
    {"ator", "ate", Cond::MPositive},    {"alism", "al", Cond::MPositive},
    {"iveness", "ive", Cond::MPositive}, {"fulness", "ful", Cond::MPositive},
    {"ousness", "ous", Cond::MPositive}, {"aliti", "al", Cond::MPositive},
    {"iviti", "ive", Cond::MPositive},   {"biliti", "ble", Cond::MPositive},
};

constexpr Rule kStep3[] = {
    {"icate", "ic", Cond::MPositive}, {"ative", "", Cond::MPositive},
    {"alize", "al", Cond::MPositive}, {"iciti", "ic", Cond::MPositive},
    {"ical", "ic", Cond::MPositive},  {"ful", "", Cond::MPositive},
    {"ness", "", Cond::MPositive},
};

constexpr Rule kStep4[] = {
    {"al", "", Cond::MGreaterOne},    {"ance", "", Cond::MGreaterOne},
    {"ence", "", Cond::MGreaterOne},  {"er", "", Cond::MGreaterOne},
    {"ic", "", Cond::MGreaterOne},    {"able", "", Cond::MGreaterOne},
    {"ible", "", Cond::MGreaterOne},  {"ant", "", Cond::MGreaterOne},
    {"ement", "", Cond::MGreaterOne}, {"ment", "", Cond::MGreaterOne},
    {"ent", "", Cond::MGreaterOne},   {"ion", "", Cond::MGreaterOneAndEndsST},
    {"ou", "", Cond::MGreaterOne},    {"ism", "", Cond::MGreaterOne},
    {"ate", "", Cond::MGreaterOne},   {"iti", "", Cond::MGreaterOne},
    {"ous", "", Cond::MGreaterOne},   {"ive", "", Cond::MGreaterOne},
    {"ize", "", Cond::MGreaterOne},
};

} // namespace

std::string porter_stem(std::string_view word) {
    std::string w(word);
    if (w.size() <= 2) return w;

    // Step 1a
    if (w.ends_with("sses")) {
        w.erase(w.size() - 2);
    } else if (w.ends_with("ies")) {
        w.erase(w.size() - 2);
    } else if (w.ends_with("ss")) {
        // keep
    } else if (w.ends_with("s")) {
        w.pop_back();
    }

    // Step 1b
    bool cleanup = false;
    if (w.ends_with("eed")) {
        std::string stem = w.substr(0, w.size() - 3);
        if (measure(stem) > 0) w = stem + "ee";
    } else if (w.ends_with("ed")) {
        std::string stem = w.substr(0, w.size() - 2);
        if (has_vowel(stem)) {
            w = stem;
            cleanup = true;
        }
    } else if (w.ends_with("ing")) {
        std::string stem = w.substr(0, w.size() - 3);
        if (has_vowel(stem)) {
            w = stem;
            cleanup = true;
        }
    }
    if (cleanup) {
        if (w.ends_with("at") || w.ends_with("bl") || w.ends_with("iz")) {
            w += 'e';
        } else if (ends_double_consonant(w) && w.back() != 'l' &&
                   w.back() != 's' && w.back() != 'z') {
            w.pop_back();
        } else if (measure(w) == 1 && ends_cvc(w)) {
            w += 'e';
        }
    }

    // Step 1c
    if (w.ends_with("y")) {
        std::string stem = w.substr(0, w.size() - 1);
        if (has_vowel(stem)) w = stem + "i";
    }

    apply_step(w, kStep2);
    apply_step(w, kStep3);
    apply_step(w, kStep4);

    // Step 5a
    if (w.ends_with("e")) {
        std::string stem = w.substr(0, w.size() - 1);
        int m = measure(stem);
        if (m > 1 || (m == 1 && !ends_cvc(stem))) w = stem;
    }
    // Step 5b
    if (measure(w) > 1 && ends_double_consonant(w) && w.back() == 'l')
        w.pop_back();

    return w;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        unsigned char u = static_cast<unsigned char>(ch);
        if (std::isalnum(u)) {
            current += static_cast<char>(std::tolower(u));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<std::string> tokenize_and_stem(std::string_view text) {
    std::vector<std::string> tokens = tokenize(text);
    for (std::string& t : tokens) t = porter_stem(t);
    return tokens;
}

TermVector term_vector(std::string_view text) {
    TermVector v;
    add_terms(v, text);
    return v;
}

void add_terms(TermVector& acc, std::string_view text) {
    for (std::string& t : tokenize_and_stem(text)) ++acc[std::move(t)];
}

double cosine_similarity(const TermVector& a, const TermVector& b) {
    if (a.empty() || b.empty()) return 0.0;
    double dot = 0.0;
    const TermVector& small = a.size() <= b.size() ? a : b;
    const TermVector& large = a.size() <= b.size() ? b : a;
    for (const auto& [term, count] : small) {
        auto it = large.find(term);
        if (it != large.end()) dot += static_cast<double>(count) * it->second;
    }
    auto norm = [](const TermVector& v) {
        double s = 0.0;
        for (const auto& [term, count] : v) s += static_cast<double>(count) * count;
        return std::sqrt(s);
    };
    return dot / (norm(a) * norm(b));
}

} // namespace gralap::text
