#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "repunet/completion_parser.hpp"

using namespace repunet;

namespace {

bool retryable(JudgmentKind kind, const std::string& text) {
    try {
        parse_completion(kind, text);
    } catch (const BackendError& e) {
        return e.retryable();
    }
    FAIL("expected a BackendError");
    return false;
}

} // namespace

TEST_CASE("key-value extraction tolerates markdown dressing") {
    auto kv = completion_key_values(
        "Here is my answer:\n"
        "- **Score**: 0.7\n"
        "  content: they cooperated again\n"
        "1. decision: yes\n"
        "> target: Agent-4\n"
        "This long explanatory sentence: is prose, not a key.\n");
    CHECK(kv.at("score") == "0.7");
    CHECK(kv.at("content") == "they cooperated again");
    CHECK(kv.at("decision") == "yes");
    CHECK(kv.at("target") == "Agent-4");
    CHECK(kv.count("this long explanatory sentence") == 0);
}

TEST_CASE("first occurrence of a key wins") {
    auto kv = completion_key_values("score: 0.5\nscore: -0.9\n");
    CHECK(kv.at("score") == "0.5");
}

TEST_CASE("reputation scores parse with surrounding prose") {
    auto r = parse_completion(JudgmentKind::shape_repu_peer,
                              "score: 0.65\ncontent: a solid partner so far\n");
    CHECK(*r.mu == doctest::Approx(0.65));
    CHECK(r.content == "a solid partner so far");

    r = parse_completion(JudgmentKind::shape_repu_self,
                         "I thought about it.\n**score:** -0.25 (slightly ashamed)\n"
                         "content: I let them down\n");
    CHECK(*r.mu == doctest::Approx(-0.25));

    CHECK(retryable(JudgmentKind::shape_repu_peer, "content: no score here"));
    CHECK(retryable(JudgmentKind::shape_repu_peer, "score: banana\ncontent: x"));
    CHECK(retryable(JudgmentKind::shape_repu_peer, "score: 0.5\n"));  // missing content
    CHECK(retryable(JudgmentKind::shape_repu_peer, ""));
    CHECK(retryable(JudgmentKind::shape_repu_peer, "   \n  "));
}

TEST_CASE("gossip-driven updates may answer with a skip word") {
    for (const char* word : {"unchanged", "none", "skip", "no change"}) {
        auto r = parse_completion(JudgmentKind::shape_repu_gossip,
                                  std::string("score: ") + word + "\n");
        CHECK(r.skip);
    }
    // but plain peer updates may not
    CHECK(retryable(JudgmentKind::shape_repu_peer, "score: unchanged\ncontent: x"));
}

TEST_CASE("yes/no decisions accept several verb forms") {
    auto dec = [](const std::string& text) {
        return *parse_completion(JudgmentKind::interact_edge_shape, "decision: " + text).decision;
    };
    CHECK(dec("yes") == EdgeDecision::yes);
    CHECK(dec("Yes, keep them") == EdgeDecision::yes);
    CHECK(dec("keep") == EdgeDecision::yes);
    CHECK(dec("true") == EdgeDecision::yes);
    CHECK(dec("no") == EdgeDecision::no);
    CHECK(dec("Never again") == EdgeDecision::no);
    CHECK(dec("cut them off") == EdgeDecision::no);
    CHECK(dec("sever") == EdgeDecision::no);
    CHECK(retryable(JudgmentKind::gossip_will, "decision: maybe"));
    CHECK(retryable(JudgmentKind::gossip_edge_shape, "verdict: yes"));
}

TEST_CASE("listener choice accepts names and bare ids") {
    CHECK(*parse_completion(JudgmentKind::gossip_choice, "listener: Agent-7").chosen == 7);
    CHECK(*parse_completion(JudgmentKind::gossip_choice, "listener: agent 12").chosen == 12);
    CHECK(*parse_completion(JudgmentKind::gossip_choice, "listener: 4").chosen == 4);
    CHECK(retryable(JudgmentKind::gossip_choice, "listener: my best friend"));
}

TEST_CASE("identify parses target, valence, and summary — or skips") {
    auto r = parse_completion(JudgmentKind::gossip_identify,
                              "target: Agent-9\nvalence: negative\n"
                              "summary: they defected on Agent-2\n");
    CHECK(*r.chosen == 9);
    CHECK(*r.valence == Valence::negative);
    CHECK(r.summary == "they defected on Agent-2");

    r = parse_completion(JudgmentKind::gossip_identify,
                         "target: Agent-3\nvalence: Positive account\nsummary: praised\n");
    CHECK(*r.valence == Valence::positive);
    r = parse_completion(JudgmentKind::gossip_identify,
                         "target: Agent-3\nvalence: neutral\nsummary: just a mention\n");
    CHECK(*r.valence == Valence::neutral);

    CHECK(parse_completion(JudgmentKind::gossip_identify, "target: none").skip);
    CHECK(parse_completion(JudgmentKind::gossip_identify, "target: nobody").skip);
    CHECK(retryable(JudgmentKind::gossip_identify,
                    "target: Agent-3\nvalence: sideways\nsummary: s\n"));
    CHECK(retryable(JudgmentKind::gossip_identify, "target: Agent-3\nvalence: negative\n"));
}

TEST_CASE("credibility parses the first number") {
    CHECK(*parse_completion(JudgmentKind::gossip_evaluate, "credibility: 4").likert == 4);
    CHECK(*parse_completion(JudgmentKind::gossip_evaluate, "credibility: 2 out of 5").likert == 2);
    CHECK(retryable(JudgmentKind::gossip_evaluate, "credibility: quite believable"));
}

TEST_CASE("actions parse their word and amount rules") {
    auto act = [](const std::string& text) {
        return *parse_completion(JudgmentKind::scenario_action, text).action;
    };
    CHECK(act("action: cooperate").kind == ActionKind::cooperate);
    CHECK(act("action: Defect!").kind == ActionKind::defect);
    CHECK(act("action: participate").kind == ActionKind::participate);
    CHECK(act("action: stay out").kind == ActionKind::not_participate);
    CHECK(act("action: sit this one out").kind == ActionKind::not_participate);
    CHECK(act("action: reject").kind == ActionKind::reject);
    CHECK(act("action: decline the offer").kind == ActionKind::reject);

    auto invest = act("action: invest\namount: 3.5");
    CHECK(invest.kind == ActionKind::invest);
    CHECK(invest.amount == doctest::Approx(3.5));
    auto alloc = act("action: return the fair share\namount: 4");
    CHECK(alloc.kind == ActionKind::allocate);
    CHECK(alloc.amount == doctest::Approx(4.0));
    auto prop = act("action: propose\namount: 0.5");
    CHECK(prop.kind == ActionKind::propose);
    CHECK(prop.amount == doctest::Approx(0.5));
    auto dev = act("action: deviate\namount: 0");
    CHECK(dev.kind == ActionKind::deviate);
    CHECK(dev.amount == 0.0);

    CHECK(retryable(JudgmentKind::scenario_action, "action: invest"));  // amount required
    CHECK(retryable(JudgmentKind::scenario_action, "action: flee"));
    CHECK(retryable(JudgmentKind::scenario_action, "I would cooperate, probably."));
}
