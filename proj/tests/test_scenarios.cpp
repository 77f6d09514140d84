#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "repunet/rng.hpp"
#include "repunet/scenarios.hpp"

using namespace repunet;

TEST_CASE("default payoff matrix is the canonical dilemma") {
    PayoffMatrix m;
    m.validate();
    auto cc = pd_payoff(m, ActionKind::cooperate, ActionKind::cooperate);
    auto dd = pd_payoff(m, ActionKind::defect, ActionKind::defect);
    auto dc = pd_payoff(m, ActionKind::defect, ActionKind::cooperate);
    auto cd = pd_payoff(m, ActionKind::cooperate, ActionKind::defect);
    CHECK(cc == std::pair{3.0, 3.0});
    CHECK(dd == std::pair{1.0, 1.0});
    CHECK(dc == std::pair{5.0, 0.0});
    CHECK(cd == std::pair{0.0, 5.0});
    CHECK_THROWS_AS(pd_payoff(m, ActionKind::invest, ActionKind::cooperate),
                    ValidationError);
}

TEST_CASE("payoff validation rejects non-dilemma matrices") {
    PayoffMatrix m;
    m.temptation = 2.0;  // breaks temptation > reward
    CHECK_THROWS_AS(m.validate(), ValidationError);
    m = {};
    m.sucker = 1.0;  // breaks punishment > sucker
    CHECK_THROWS_AS(m.validate(), ValidationError);
    m = {};
    m.temptation = 7.0;  // breaks 2*reward > temptation + sucker
    CHECK_THROWS_AS(m.validate(), ValidationError);
    m = {};
    m.reward = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(m.validate(), ValidationError);
}

TEST_CASE("cooperation signals and valences per action") {
    CHECK(cooperation_signal(ScenarioAction::simple(ActionKind::cooperate)));
    CHECK(cooperation_signal(ScenarioAction::simple(ActionKind::participate)));
    CHECK(cooperation_signal(ScenarioAction::with_amount(ActionKind::invest, 1)));
    CHECK(cooperation_signal(ScenarioAction::with_amount(ActionKind::allocate, 1)));
    CHECK(cooperation_signal(ScenarioAction::with_amount(ActionKind::propose, 0.5)));
    CHECK_FALSE(cooperation_signal(ScenarioAction::simple(ActionKind::defect)));
    CHECK_FALSE(cooperation_signal(ScenarioAction::simple(ActionKind::not_participate)));
    CHECK_FALSE(cooperation_signal(ScenarioAction::simple(ActionKind::reject)));
    CHECK_FALSE(cooperation_signal(ScenarioAction::with_amount(ActionKind::deviate, 0)));

    CHECK(action_valence(ScenarioAction::simple(ActionKind::cooperate)) == Valence::positive);
    CHECK(action_valence(ScenarioAction::simple(ActionKind::defect)) == Valence::negative);
}

TEST_CASE("roles and action text") {
    CHECK(role_string(ScenarioId::pd, ScenarioAction::simple(ActionKind::cooperate)) == "partner");
    CHECK(role_string(ScenarioId::participation,
                      ScenarioAction::simple(ActionKind::participate)) == "participant");
    CHECK(role_string(ScenarioId::trading,
                      ScenarioAction::with_amount(ActionKind::invest, 2)) == "investor");
    CHECK(role_string(ScenarioId::trading, ScenarioAction::simple(ActionKind::reject)) ==
          "investor");
    CHECK(role_string(ScenarioId::trading,
                      ScenarioAction::with_amount(ActionKind::allocate, 2)) == "trustee");
    CHECK(action_text(ScenarioAction::simple(ActionKind::cooperate)) == "cooperate");
    CHECK(action_text(ScenarioAction::with_amount(ActionKind::invest, 5.0)) == "invest 5");
}

TEST_CASE("encounter views mirror the encounter for each side") {
    auto e = Encounter::make(3, 2, 1, 4, ScenarioId::pd,
                             ScenarioAction::simple(ActionKind::cooperate),
                             ScenarioAction::simple(ActionKind::defect), 0, 5, "text");
    auto va = make_encounter_view(e, 1);
    CHECK(va.counterpart == 4);
    CHECK(va.counterpart_name == "Agent-4");
    CHECK(va.own_action.kind == ActionKind::cooperate);
    CHECK(va.counterpart_action.kind == ActionKind::defect);
    CHECK(va.own_valence == Valence::positive);
    CHECK(va.counterpart_valence == Valence::negative);
    CHECK(va.summary == "text");
    auto vb = make_encounter_view(e, 4);
    CHECK(vb.counterpart == 1);
    CHECK(vb.own_valence == Valence::negative);
    CHECK(vb.counterpart_valence == Valence::positive);
}

TEST_CASE("participation requeries fall on window boundaries") {
    CHECK(participation_requery_due(5, 5));
    CHECK(participation_requery_due(10, 5));
    CHECK_FALSE(participation_requery_due(6, 5));
    CHECK_FALSE(participation_requery_due(1, 5));
}

TEST_CASE("trade settlement arithmetic") {
    std::vector<AgentId> ids{1, 2};

    SUBCASE("honored split") {
        auto s = TradingState::init(ids, 10.0);
        // invest 5, doubled to 10, trustee returns half
        settle_trade(s, 1, 2, 5.0, 5.0);
        CHECK(s.of(1) == doctest::Approx(10.0));
        CHECK(s.of(2) == doctest::Approx(15.0));
    }
    SUBCASE("full deviation") {
        auto s = TradingState::init(ids, 10.0);
        settle_trade(s, 1, 2, 10.0, 0.0);
        CHECK(s.of(1) == doctest::Approx(0.0));
        CHECK(s.of(2) == doctest::Approx(30.0));
    }
    SUBCASE("overdraw and out-of-range returns are rejected") {
        auto s = TradingState::init(ids, 10.0);
        CHECK_THROWS_AS(settle_trade(s, 1, 2, 10.5, 0.0), ValidationError);
        CHECK_THROWS_AS(settle_trade(s, 1, 2, 5.0, 10.1), ValidationError);
        CHECK_THROWS_AS(settle_trade(s, 1, 2, 5.0, -0.1), ValidationError);
        CHECK(allocation_in_range(5.0, 10.0));
        CHECK_FALSE(allocation_in_range(5.0, 10.0001));
    }
}

TEST_CASE("1000 seeded trades conserve value and never go negative") {
    std::vector<AgentId> ids{1, 2};
    Rng rng(99);
    int failures = 0;
    for (int trade = 0; trade < 1000; ++trade) {
        auto s = TradingState::init(ids, 10.0);
        const AgentId investor = rng.bounded(2) == 0 ? 1 : 2;
        const AgentId trustee = investor == 1 ? 2 : 1;
        const double invested = rng.unit() * 10.0;
        const double returned = rng.unit() * 2.0 * invested;
        settle_trade(s, investor, trustee, invested, returned);

        // conservation: final total minus the injected units is the opening 20
        if (std::fabs((s.of(1) + s.of(2)) - invested - 20.0) > 1e-9) ++failures;
        if (s.of(investor) < 0.0 || s.of(trustee) < 0.0) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("sequential trades keep balances sane as money compounds") {
    std::vector<AgentId> ids{1, 2};
    Rng rng(7);
    auto s = TradingState::init(ids, 10.0);
    for (int trade = 0; trade < 1000; ++trade) {
        const AgentId investor = rng.bounded(2) == 0 ? 1 : 2;
        const AgentId trustee = investor == 1 ? 2 : 1;
        // cap the stake so growth stays polynomial rather than exponential
        const double invested = std::min(rng.unit() * s.of(investor), 5.0);
        const double returned = rng.unit() * 2.0 * invested;
        settle_trade(s, investor, trustee, invested, returned);  // throws on violation
        REQUIRE(s.of(1) >= 0.0);
        REQUIRE(s.of(2) >= 0.0);
    }
}
