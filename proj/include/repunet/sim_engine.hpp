#pragma once

#include <memory>

#include "repunet/events.hpp"
#include "repunet/run_config.hpp"

namespace repunet {

// How a run ended. Values double as process exit codes.
enum class RunExit {
    stabilized = 0,     // cooperation rate went flat
    max_rounds = 2,     // round budget exhausted first
    backend_abort = 3,  // the judgment backend gave up
};

struct RunResult {
    RunConfig config;
    int rounds = 0;
    bool stabilized = false;
    RunExit exit = RunExit::max_rounds;
    std::string abort_reason;                // set when exit == backend_abort
    std::vector<double> cooperation_series;  // one rate per executed round
    EventLog log;
    std::vector<AgentDescription> agents;  // ascending id
    std::map<AgentId, RepuDatabase> databases;

    int exit_code() const { return static_cast<int>(exit); }
    json summary() const;  // run-level numbers, no event stream
};

// Drives one society for one run: per round it matches partners, conducts the
// scenario encounters, lets both sides revise opinions (when reputation is
// on), runs the gossip phase (when gossip is on), and lets everyone
// reconsider their outgoing edges. Stops early once the cooperation-rate
// series is flat. All randomness flows from the config seed; two runs with
// equal configs produce byte-identical logs.
class SimEngine {
  public:
    // `backend` overrides the config's backend choice (used by tests).
    explicit SimEngine(RunConfig cfg,
                       std::shared_ptr<JudgmentBackend> backend = nullptr);

    // Executes the run. When `log_path` is given, events stream to that file
    // as they happen, so an aborted run still leaves a usable partial log.
    RunResult run(const std::string& log_path = "");

    // True once `series` has at least min_rounds entries and the last
    // `window` of them span no more than `band`.
    static bool is_stable(const std::vector<double>& series,
                          const StabilizationConfig& cfg);

  private:
    RunConfig cfg_;
    std::shared_ptr<JudgmentBackend> backend_;
};

// Mean of the last `k` entries (all of them when fewer); 0 when empty.
double mean_final_rate(const std::vector<double>& series, int k);

// Runs `repeats` independent runs, seeding run k with seed+k. When `log_dir`
// is given, each run streams to <log_dir>/run_<k>.jsonl.
std::vector<RunResult> run_experiment(
    const RunConfig& base, int repeats, const std::string& log_dir = "",
    std::shared_ptr<JudgmentBackend> backend = nullptr);

} // namespace repunet
