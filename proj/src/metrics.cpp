#include "repunet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "repunet/scenarios.hpp"
#include "repunet/sentiment.hpp"

namespace repunet {

namespace {

ScenarioAction action_from_payload(const json& j) {
    return scenario_action_from_json(j);
}

} // namespace

std::vector<RatePoint> cooperation_rate_series(const std::vector<SimEvent>& events) {
    std::map<int, std::pair<int, int>> per_round;  // round -> (coop, total)
    for (const auto& ev : events) {
        if (ev.kind != EventKind::encounter) continue;
        auto& [coop, total] = per_round[ev.round];
        for (const char* key : {"action_a", "action_b"}) {
            coop += cooperation_signal(action_from_payload(ev.payload.at(key))) ? 1 : 0;
            total += 1;
        }
    }
    std::vector<RatePoint> series;
    series.reserve(per_round.size());
    for (const auto& [round, counts] : per_round)
        series.push_back(
            {round, counts.second == 0
                        ? 0.0
                        : static_cast<double>(counts.first) / counts.second});
    return series;
}

double mean_final_rate(const std::vector<RatePoint>& series, int k) {
    if (series.empty() || k <= 0) return 0.0;
    const std::size_t n = std::min(series.size(), static_cast<std::size_t>(k));
    double sum = 0.0;
    for (std::size_t i = series.size() - n; i < series.size(); ++i)
        sum += series[i].rate;
    return sum / static_cast<double>(n);
}

BehaviorPoints behavior_reputation_points(const std::vector<SimEvent>& events,
                                          int window) {
    std::set<AgentId> roster;
    std::map<std::pair<AgentId, AgentId>, double> opinion;  // (owner, target)
    int last_round = 0;
    for (const auto& ev : events) {
        last_round = std::max(last_round, ev.round);
        if (ev.kind == EventKind::encounter) {
            roster.insert(ev.payload.at("a").get<AgentId>());
            roster.insert(ev.payload.at("b").get<AgentId>());
        } else if (ev.kind == EventKind::reputation_update) {
            const AgentId owner = ev.payload.at("owner").get<AgentId>();
            const auto& after = ev.payload.at("after");
            const AgentId target = after.at("target").get<AgentId>();
            roster.insert(owner);
            roster.insert(target);
            if (owner != target)  // self-opinions are not "incoming"
                opinion[{owner, target}] = after.at("mu").get<double>();
        }
    }

    // Cooperative fraction per agent over the trailing window.
    const int first_counted = last_round - window + 1;
    std::map<AgentId, std::pair<int, int>> acted;  // agent -> (coop, total)
    for (const auto& ev : events) {
        if (ev.kind != EventKind::encounter || ev.round < first_counted) continue;
        for (const auto& [who_key, act_key] :
             {std::pair{"a", "action_a"}, std::pair{"b", "action_b"}}) {
            const AgentId who = ev.payload.at(who_key).get<AgentId>();
            auto& [coop, total] = acted[who];
            coop += cooperation_signal(action_from_payload(ev.payload.at(act_key)))
                        ? 1
                        : 0;
            total += 1;
        }
    }

    BehaviorPoints out;
    for (AgentId agent : roster) {
        double sum = 0.0;
        int cnt = 0;
        for (const auto& [key, mu] : opinion) {
            if (key.second != agent) continue;
            sum += mu;
            ++cnt;
        }
        if (cnt == 0) {
            out.excluded.push_back(agent);
            continue;
        }
        const auto it = acted.find(agent);
        const int coop = it == acted.end() ? 0 : it->second.first;
        const int total = it == acted.end() ? 0 : it->second.second;
        BehaviorPoint p;
        p.agent = agent;
        p.x = sum / cnt;
        p.y = static_cast<double>(coop) / std::max(1, total);
        out.points.push_back(p);
    }
    return out;
}

namespace {

struct Sums {
    double sxx = 0.0, syy = 0.0, sxy = 0.0, mx = 0.0, my = 0.0;
};

Sums centered_sums(const std::vector<double>& xs, const std::vector<double>& ys) {
    Sums s;
    const std::size_t n = xs.size();
    for (std::size_t i = 0; i < n; ++i) {
        s.mx += xs[i];
        s.my += ys[i];
    }
    s.mx /= static_cast<double>(n);
    s.my /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - s.mx;
        const double dy = ys[i] - s.my;
        s.sxx += dx * dx;
        s.syy += dy * dy;
        s.sxy += dx * dy;
    }
    return s;
}

double correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
    const Sums s = centered_sums(xs, ys);
    if (s.syy == 0.0) return 0.0;
    return s.sxy / std::sqrt(s.sxx * s.syy);
}

} // namespace

RegressionResult linear_regression(const std::vector<std::pair<double, double>>& pts,
                                   int permutations, std::uint64_t seed) {
    const int n = static_cast<int>(pts.size());
    if (n < 3)
        throw ValidationError("linear_regression needs at least 3 points");
    std::vector<double> xs(pts.size()), ys(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!std::isfinite(pts[i].first) || !std::isfinite(pts[i].second))
            throw ValidationError("linear_regression: non-finite point");
        xs[i] = pts[i].first;
        ys[i] = pts[i].second;
    }

    const Sums s = centered_sums(xs, ys);
    if (s.sxx == 0.0)
        throw ValidationError("linear_regression: x values are all equal");

    RegressionResult res;
    res.n = n;
    if (s.syy == 0.0) {
        // A flat response carries no relation at all.
        res.slope = 0.0;
        res.intercept = s.my;
        res.r = 0.0;
        res.p_perm = 1.0;
        return res;
    }

    res.slope = s.sxy / s.sxx;
    res.intercept = s.my - res.slope * s.mx;
    res.r = s.sxy / std::sqrt(s.sxx * s.syy);

    if (permutations < 1)
        throw ValidationError("linear_regression: permutations must be >= 1");
    std::mt19937_64 gen(seed);
    // Hand-rolled Fisher-Yates: identical shuffles on every platform.
    auto shuffle_ys = [&](std::vector<double>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::uint64_t m = i;
            const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % m);
            std::uint64_t x = gen();
            while (x >= limit) x = gen();
            std::swap(v[i - 1], v[static_cast<std::size_t>(x % m)]);
        }
    };

    const double observed = std::fabs(res.r);
    std::vector<double> perm = ys;
    int at_least = 0;
    for (int it = 0; it < permutations; ++it) {
        shuffle_ys(perm);
        if (std::fabs(correlation(xs, perm)) >= observed) ++at_least;
    }
    res.p_perm = (1.0 + at_least) / (1.0 + permutations);
    return res;
}

std::vector<GossipFrequencyPoint> gossip_frequency_points(
    const std::vector<SimEvent>& events) {
    std::map<AgentId, int> counts;
    std::map<std::pair<AgentId, AgentId>, double> opinion;
    std::set<AgentId> roster;
    for (const auto& ev : events) {
        if (ev.kind == EventKind::gossip) {
            const AgentId target = ev.payload.at("target").get<AgentId>();
            counts[target] += 1;
            roster.insert(target);
        } else if (ev.kind == EventKind::encounter) {
            roster.insert(ev.payload.at("a").get<AgentId>());
            roster.insert(ev.payload.at("b").get<AgentId>());
        } else if (ev.kind == EventKind::reputation_update) {
            const AgentId owner = ev.payload.at("owner").get<AgentId>();
            const auto& after = ev.payload.at("after");
            const AgentId target = after.at("target").get<AgentId>();
            if (owner != target)
                opinion[{owner, target}] = after.at("mu").get<double>();
        }
    }

    std::vector<GossipFrequencyPoint> out;
    for (AgentId agent : roster) {
        GossipFrequencyPoint p;
        p.target = agent;
        const auto it = counts.find(agent);
        p.times_gossiped_about = it == counts.end() ? 0 : it->second;
        double sum = 0.0;
        int cnt = 0;
        for (const auto& [key, mu] : opinion) {
            if (key.second != agent) continue;
            sum += mu;
            ++cnt;
        }
        if (cnt > 0) {
            p.mean_incoming_mu = sum / cnt;
            p.has_incoming_mu = true;
        }
        out.push_back(p);
    }
    return out;
}

SentimentSummary sentiment_summary(const std::vector<SimEvent>& events,
                                   SentimentMode mode) {
    SentimentSummary s;
    double weighted = 0.0;
    for (const auto& ev : events) {
        if (ev.kind != EventKind::gossip) continue;
        Valence v;
        double confidence;
        if (mode == SentimentMode::valence_tags) {
            v = valence_from_string(ev.payload.at("valence").get<std::string>());
            confidence = 1.0;
        } else {
            const SentimentLabel label =
                lexicon_classify(ev.payload.at("summary").get<std::string>());
            v = label.valence;
            confidence = label.confidence;
        }
        s.n += 1;
        if (v == Valence::positive) s.positive += 1;
        else if (v == Valence::negative) s.negative += 1;
        else s.neutral += 1;
        weighted += valence_sign(v) * confidence;
    }
    s.weighted_mean = s.n == 0 ? 0.0 : weighted / s.n;
    return s;
}

} // namespace repunet
