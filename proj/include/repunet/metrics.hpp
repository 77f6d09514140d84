#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "repunet/events.hpp"

namespace repunet {

// Every metric here is a pure function of a parsed event log; nothing needs
// the live engine state, so logs written yesterday analyze the same today.

struct RatePoint {
    int round = 0;
    double rate = 0.0;  // cooperative signals / total signals that round
};

// Per-round cooperation rate, one entry per round that had encounters.
std::vector<RatePoint> cooperation_rate_series(const std::vector<SimEvent>& events);

// Mean rate over the final `k` rounds of the series (all when fewer).
double mean_final_rate(const std::vector<RatePoint>& series, int k);

struct BehaviorPoint {
    AgentId agent = 0;
    double x = 0.0;  // mean of peers' final stored opinions of this agent
    double y = 0.0;  // cooperative fraction of its actions in the last `window` rounds
};

struct BehaviorPoints {
    std::vector<BehaviorPoint> points;
    std::vector<AgentId> excluded;  // agents nobody holds an opinion of
};

// Reputation-versus-behavior scatter. x averages the latest stored opinion
// each peer holds of the agent at log end; y counts the agent's cooperative
// signals over the last `window` rounds, divided by max(1, actions) so an
// agent frozen out of interaction scores 0 rather than dropping out.
BehaviorPoints behavior_reputation_points(const std::vector<SimEvent>& events,
                                          int window = 10);

struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;       // Pearson correlation
    double p_perm = 1.0;  // two-sided seeded permutation p-value on |r|
    int n = 0;
};

// Ordinary least squares plus a seeded permutation test (y reshuffled
// `permutations` times; p = (1 + #{|r*| >= |r|}) / (1 + permutations)).
// Degenerate inputs: fewer than 3 points or constant x throw ValidationError;
// constant y returns slope 0, r 0, p 1.
RegressionResult linear_regression(const std::vector<std::pair<double, double>>& pts,
                                   int permutations = 10000,
                                   std::uint64_t seed = 1);

struct GossipFrequencyPoint {
    AgentId target = 0;
    int times_gossiped_about = 0;
    double mean_incoming_mu = 0.0;
    bool has_incoming_mu = false;
};

// How often each agent is the subject of gossip, next to how it is seen.
std::vector<GossipFrequencyPoint> gossip_frequency_points(
    const std::vector<SimEvent>& events);

enum class SentimentMode { valence_tags, lexicon };

struct SentimentSummary {
    int n = 0;
    int positive = 0;
    int neutral = 0;
    int negative = 0;
    double weighted_mean = 0.0;  // sum(value * confidence) / n; 0 when empty
};

// Aggregate tone of all gossip in the log. valence_tags trusts the valence
// recorded on each exchange (confidence 1); lexicon re-classifies the summary
// text with the word-list classifier.
SentimentSummary sentiment_summary(const std::vector<SimEvent>& events,
                                   SentimentMode mode = SentimentMode::valence_tags);

} // namespace repunet
