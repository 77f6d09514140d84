#include "repunet/sentiment.hpp"

#include <array>
#include <cctype>

namespace repunet {

namespace {

std::string lowered(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

int count_hits(const std::string& text, const char* const* words, std::size_t n) {
    int hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string w = words[i];
        for (std::size_t pos = text.find(w); pos != std::string::npos;
             pos = text.find(w, pos + w.size()))
            ++hits;
    }
    return hits;
}

constexpr const char* kPositive[] = {
    "cooperated", "participated", "dealt fairly", "honored", "honoured",
    "invested",   "helped",       "shared",       "generous", "trustworthy",
    "kept their word",
};

constexpr const char* kNegative[] = {
    "defected",  "stayed out", "broke the deal", "deviated", "cheated",
    "betrayed",  "exploited",  "rejected",       "refused",  "unfair",
    "dishonest", "selfish",
};

} // namespace

SentimentLabel lexicon_classify(const std::string& text) {
    const std::string t = lowered(text);
    const int pos = count_hits(t, kPositive, std::size(kPositive));
    const int neg = count_hits(t, kNegative, std::size(kNegative));
    SentimentLabel label;
    if (pos > neg) {
        label.valence = Valence::positive;
        label.confidence = 1.0;
    } else if (neg > pos) {
        label.valence = Valence::negative;
        label.confidence = 1.0;
    }
    return label;
}

} // namespace repunet
