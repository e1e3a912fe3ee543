#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "photonic/emission.hpp"
#include "photonic/pulses.hpp"

namespace photonic {

/// An ordered pulse program over a fixed atomic register.
struct Schedule {
    std::string name;
    int level_count = 0;
    std::vector<PulseInstruction> instructions;
    int expected_mode_count = 0;  // must equal emission_count(instructions)
};

/// Number of emit/random-emit instructions — the photonic mode count a
/// complete run produces.
int emission_count(const std::vector<PulseInstruction>& instructions);

/// Equality up to metadata: same level count, instruction list, and mode
/// count; the name is ignored (parsing text cannot recover it).
bool structurally_equal(const Schedule& a, const Schedule& b);

/// Static checks before execution: positive level count, every referenced
/// level in range, well-formed emission maps, finite angles, measure
/// indices resolvable against the modes emitted so far, and
/// expected_mode_count consistent. Throws std::invalid_argument naming
/// the offending instruction.
void validate_schedule(const Schedule& schedule);

/// Execution failure wrapping a pulse-operation error; carries the
/// zero-based index of the instruction that raised it.
class ScheduleError : public SimError {
public:
    ScheduleError(std::size_t instruction_index, PulseKind kind, const std::string& message);
    std::size_t instruction_index() const { return index_; }

private:
    std::size_t index_;
};

/// Trajectory mode samples classical randomness (coin flips, measurement
/// outcomes) from a seeded generator and keeps one branch. Branch mode
/// keeps every outcome as a weighted branch.
struct RunMode {
    enum class Kind : std::uint8_t { Trajectory, Branch };

    Kind kind = Kind::Branch;
    std::uint64_t seed = 0;

    static RunMode trajectory(std::uint64_t seed) { return {Kind::Trajectory, seed}; }
    static RunMode branch() { return {Kind::Branch, 0}; }
};

struct MeasurementRecord {
    int mode_index = 0;  // 1-based, with "last" resolved at execution time
    Letter outcome = Letter::Vac;
    double probability = 0.0;

    bool operator==(const MeasurementRecord&) const = default;
};

/// Outcome of a schedule run. Trajectory mode yields exactly one branch
/// of weight 1; branch mode yields one branch per surviving outcome
/// history. Each branch carries one record per measure instruction.
struct SimResult {
    struct Branch {
        double weight;
        EnsembleState state;
        std::vector<MeasurementRecord> records;
    };

    std::vector<Branch> branches;
    double duration_s = 0.0;

    /// The single branch of a trajectory run; throws std::logic_error
    /// when more than one branch is present.
    const Branch& trajectory() const;

    /// Branch weights and states as a plain ensemble.
    StateEnsemble ensemble() const;
};

/// Called after each instruction with its index and the surviving
/// branches; lets tests check invariants on intermediate states.
using StepObserver = std::function<void(std::size_t instruction_index,
                                        const PulseInstruction& instruction,
                                        const std::vector<SimResult::Branch>& branches)>;

/// Validates, then applies the instructions in order. Branches whose
/// probability drops below 1e-12 are discarded. Attaches the timing
/// estimate for the full instruction list.
SimResult run_schedule(const Schedule& schedule, const RunMode& mode,
                       const StepObserver& observer = {}, const TimingModel& timing = {});

/// (|photon...photon> + |vac...vac>)/sqrt(2) over `mode_count`
/// number-encoded modes: a superposed atom conditionally feeds one
/// emission per mode, then the final toggle-and-emit empties the
/// register. Levels: 2. Requires mode_count >= 2.
Schedule ghz_schedule(int mode_count);

/// Two polarization-encoded photons in (|RL> - |LR>)/sqrt(2). Levels: 4.
Schedule bell_schedule();

/// Three photons: a maximally mixed one in `mixed_slot` (1-3) and the
/// Bell pair in the other two slots, emitted in Bell order. Levels: 4.
Schedule trine_schedule(int mixed_slot);

/// Linear cluster: `photon_count` polarization-encoded photons followed
/// by a measurement of the last one to decouple the atomic register.
/// Levels: 4. Requires photon_count >= 2.
Schedule cluster1d_schedule(int photon_count);

/// Ladder cluster: two interleaved chains, two photons per column,
/// ending with measurements of the last column's pair. Levels: 8.
/// Requires columns >= 2.
Schedule cluster2d_schedule(int columns);

}  // namespace photonic
