#pragma once

#include <string>

#include "repunet/core_model.hpp"

namespace repunet {

struct SentimentLabel {
    Valence valence = Valence::neutral;
    double confidence = 0.0;  // in [0,1]
};

// Word-list sentiment for gossip summaries. Counts hits from a positive and
// a negative lexicon; the majority side wins with confidence 1, a tie or no
// hit at all is neutral with confidence 0.
SentimentLabel lexicon_classify(const std::string& text);

} // namespace repunet
