#include "photonic/protocols.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace photonic {

namespace {

constexpr double kBranchDropThreshold = 1e-12;
constexpr double kHalfPi = std::numbers::pi / 2.0;

[[noreturn]] void fail_validation(std::size_t index, PulseKind kind, const std::string& what) {
    throw std::invalid_argument("instruction " + std::to_string(index) + " (" +
                                kind_keyword(kind) + "): " + what);
}

void check_level_index(std::size_t index, const PulseInstruction& instruction, int level,
                       int level_count) {
    if (level < 1 || level > level_count)
        fail_validation(index, instruction.kind,
                        "level " + std::to_string(level) + " outside 1.." +
                            std::to_string(level_count));
}

}  // namespace

int emission_count(const std::vector<PulseInstruction>& instructions) {
    int count = 0;
    for (const PulseInstruction& instruction : instructions)
        if (is_emission_kind(instruction.kind))
            ++count;
    return count;
}

bool structurally_equal(const Schedule& a, const Schedule& b) {
    return a.level_count == b.level_count && a.expected_mode_count == b.expected_mode_count &&
           a.instructions == b.instructions;
}

void validate_schedule(const Schedule& schedule) {
    if (schedule.level_count < 1)
        throw std::invalid_argument("schedule: level count must be positive");

    int modes_so_far = 0;
    for (std::size_t i = 0; i < schedule.instructions.size(); ++i) {
        const PulseInstruction& ins = schedule.instructions[i];
        switch (ins.kind) {
            case PulseKind::Load:
            case PulseKind::Toggle:
                check_level_index(i, ins, ins.level, schedule.level_count);
                break;
            case PulseKind::SuperpositionLoad:
                check_level_index(i, ins, ins.level, schedule.level_count);
                if (!std::isfinite(ins.theta) || !std::isfinite(ins.phi))
                    fail_validation(i, ins.kind, "angle is not finite");
                break;
            case PulseKind::Raman:
                if (!std::isfinite(ins.theta) || !std::isfinite(ins.phi))
                    fail_validation(i, ins.kind, "angle is not finite");
                [[fallthrough]];
            case PulseKind::Feed:
            case PulseKind::Cphase:
                check_level_index(i, ins, ins.level, schedule.level_count);
                check_level_index(i, ins, ins.level2, schedule.level_count);
                if (ins.level == ins.level2)
                    fail_validation(i, ins.kind, "levels must be distinct");
                break;
            case PulseKind::Emit: {
                if (ins.emission_map.empty())
                    fail_validation(i, ins.kind, "emission map is empty");
                for (std::size_t a = 0; a < ins.emission_map.size(); ++a) {
                    const auto& [level, letter] = ins.emission_map[a];
                    check_level_index(i, ins, level, schedule.level_count);
                    if (letter != Letter::R && letter != Letter::L)
                        fail_validation(i, ins.kind, "emitted letter must be R or L");
                    for (std::size_t b = a + 1; b < ins.emission_map.size(); ++b)
                        if (ins.emission_map[b].first == level)
                            fail_validation(i, ins.kind,
                                            "level " + std::to_string(level) +
                                                " mapped twice");
                }
                break;
            }
            case PulseKind::RandomEmit:
                break;
            case PulseKind::Measure:
                if (ins.mode_index < 0)
                    fail_validation(i, ins.kind, "mode index must be positive (or 0 for last)");
                if (ins.mode_index == 0 && modes_so_far == 0)
                    fail_validation(i, ins.kind, "no emitted mode to measure");
                if (ins.mode_index > modes_so_far)
                    fail_validation(i, ins.kind,
                                    "mode " + std::to_string(ins.mode_index) +
                                        " not yet emitted (" + std::to_string(modes_so_far) +
                                        " so far)");
                break;
        }
        if (is_emission_kind(ins.kind))
            ++modes_so_far;
    }

    if (schedule.expected_mode_count != modes_so_far)
        throw std::invalid_argument("schedule: expected mode count " +
                                    std::to_string(schedule.expected_mode_count) +
                                    " does not match the " + std::to_string(modes_so_far) +
                                    " emission instructions");
}

ScheduleError::ScheduleError(std::size_t instruction_index, PulseKind kind,
                             const std::string& message)
    : SimError("instruction " + std::to_string(instruction_index) + " (" + kind_keyword(kind) +
               "): " + message),
      index_(instruction_index) {}

const SimResult::Branch& SimResult::trajectory() const {
    if (branches.size() != 1)
        throw std::logic_error("trajectory(): result holds " + std::to_string(branches.size()) +
                               " branches");
    return branches.front();
}

StateEnsemble SimResult::ensemble() const {
    StateEnsemble out;
    out.branches.reserve(branches.size());
    for (const Branch& branch : branches)
        out.branches.push_back({branch.weight, branch.state});
    return out;
}

namespace {

int resolve_mode_index(const PulseInstruction& instruction, const EnsembleState& state) {
    return instruction.mode_index == 0 ? state.mode_count() : instruction.mode_index;
}

}  // namespace

SimResult run_schedule(const Schedule& schedule, const RunMode& mode,
                       const StepObserver& observer, const TimingModel& timing) {
    validate_schedule(schedule);

    std::mt19937_64 rng(mode.seed);
    std::vector<SimResult::Branch> branches;
    branches.push_back({1.0, new_state(schedule.level_count), {}});

    for (std::size_t i = 0; i < schedule.instructions.size(); ++i) {
        const PulseInstruction& ins = schedule.instructions[i];
        try {
            switch (ins.kind) {
                case PulseKind::Load:
                    for (auto& branch : branches)
                        branch.state = load(branch.state, ins.level);
                    break;
                case PulseKind::SuperpositionLoad:
                    for (auto& branch : branches)
                        branch.state =
                            superposition_load(branch.state, ins.level, ins.theta, ins.phi);
                    break;
                case PulseKind::Raman:
                    for (auto& branch : branches)
                        branch.state =
                            raman(branch.state, ins.level, ins.level2, ins.theta, ins.phi);
                    break;
                case PulseKind::Feed:
                    for (auto& branch : branches)
                        branch.state = feed(branch.state, ins.level, ins.level2);
                    break;
                case PulseKind::Toggle:
                    for (auto& branch : branches)
                        branch.state = toggle(branch.state, ins.level);
                    break;
                case PulseKind::Cphase:
                    for (auto& branch : branches)
                        branch.state = cphase(branch.state, ins.level, ins.level2);
                    break;
                case PulseKind::Emit:
                    for (auto& branch : branches)
                        branch.state = emit(branch.state, ins.emission_map);
                    break;
                case PulseKind::RandomEmit:
                    if (mode.kind == RunMode::Kind::Trajectory) {
                        for (auto& branch : branches)
                            branch.state = random_emit(branch.state, rng);
                    } else {
                        std::vector<SimResult::Branch> next;
                        next.reserve(branches.size() * 2);
                        for (auto& branch : branches) {
                            StateEnsemble split = random_emit_branches(branch.state);
                            for (auto& sub : split.branches)
                                next.push_back({branch.weight * sub.weight,
                                                std::move(sub.state), branch.records});
                        }
                        branches = std::move(next);
                    }
                    break;
                case PulseKind::Measure:
                    if (mode.kind == RunMode::Kind::Trajectory) {
                        for (auto& branch : branches) {
                            const int index = resolve_mode_index(ins, branch.state);
                            MeasurementOutcome out = measure(branch.state, index, rng);
                            branch.records.push_back(
                                {index, out.outcome, out.probability});
                            branch.state = std::move(out.state);
                        }
                    } else {
                        std::vector<SimResult::Branch> next;
                        for (auto& branch : branches) {
                            const int index = resolve_mode_index(ins, branch.state);
                            const std::array<double, 3> weights =
                                mode_weights(branch.state, index);
                            const double total = weights[0] + weights[1] + weights[2];
                            for (std::size_t l = 0; l < weights.size(); ++l) {
                                if (weights[l] / total < kBranchDropThreshold)
                                    continue;
                                const Letter letter = static_cast<Letter>(l);
                                MeasurementOutcome out =
                                    measure(branch.state, index, rng, letter);
                                auto records = branch.records;
                                records.push_back({index, letter, out.probability});
                                next.push_back({branch.weight * out.probability,
                                                std::move(out.state), std::move(records)});
                            }
                        }
                        branches = std::move(next);
                    }
                    break;
            }
        } catch (const SimError& error) {
            throw ScheduleError(i, ins.kind, error.what());
        }
        if (observer)
            observer(i, ins, branches);
    }

    SimResult result;
    result.branches = std::move(branches);
    result.duration_s = estimate_duration(schedule.instructions, timing);
    return result;
}

Schedule ghz_schedule(int mode_count) {
    if (mode_count < 2)
        throw std::invalid_argument("ghz_schedule: mode count must be at least 2");
    Schedule schedule;
    schedule.name = "ghz-" + std::to_string(mode_count);
    schedule.level_count = 2;
    schedule.instructions.push_back(PulseInstruction::superposition_load(2, kHalfPi));
    for (int m = 0; m < mode_count - 1; ++m) {
        schedule.instructions.push_back(PulseInstruction::feed(1, 2));
        schedule.instructions.push_back(PulseInstruction::emit({{1, Letter::R}}));
    }
    schedule.instructions.push_back(PulseInstruction::toggle(2));
    schedule.instructions.push_back(PulseInstruction::emit({{2, Letter::R}}));
    schedule.expected_mode_count = mode_count;
    return schedule;
}

namespace {

// Shared atomic preparation for the Bell pair: one atom split across
// levels 2 and 3, then widened to the four-level pattern
// (|1010> - |0101>)/sqrt(2) by the two conditional feeds.
void append_bell_preparation(Schedule& schedule) {
    schedule.instructions.push_back(PulseInstruction::load(2));
    schedule.instructions.push_back(PulseInstruction::raman(2, 3, kHalfPi));
    schedule.instructions.push_back(PulseInstruction::feed(4, 3));
    schedule.instructions.push_back(PulseInstruction::feed(1, 2));
}

PulseInstruction bell_emit_first() {
    return PulseInstruction::emit({{2, Letter::L}, {3, Letter::R}});
}

PulseInstruction bell_emit_second() {
    return PulseInstruction::emit({{1, Letter::L}, {4, Letter::R}});
}

}  // namespace

Schedule bell_schedule() {
    Schedule schedule;
    schedule.name = "bell";
    schedule.level_count = 4;
    append_bell_preparation(schedule);
    schedule.instructions.push_back(bell_emit_first());
    schedule.instructions.push_back(bell_emit_second());
    schedule.expected_mode_count = 2;
    return schedule;
}

Schedule trine_schedule(int mixed_slot) {
    if (mixed_slot < 1 || mixed_slot > 3)
        throw std::invalid_argument("trine_schedule: slot must be 1, 2, or 3");
    Schedule schedule;
    schedule.name = "trine-" + std::to_string(mixed_slot);
    schedule.level_count = 4;
    append_bell_preparation(schedule);
    std::vector<PulseInstruction> emissions{bell_emit_first(), bell_emit_second()};
    emissions.insert(emissions.begin() + (mixed_slot - 1), PulseInstruction::random_emit());
    for (PulseInstruction& emission : emissions)
        schedule.instructions.push_back(std::move(emission));
    schedule.expected_mode_count = 3;
    return schedule;
}

Schedule cluster1d_schedule(int photon_count) {
    if (photon_count < 2)
        throw std::invalid_argument("cluster1d_schedule: photon count must be at least 2");
    Schedule schedule;
    schedule.name = "cluster1d-" + std::to_string(photon_count);
    schedule.level_count = 4;
    schedule.instructions.push_back(PulseInstruction::load(3));
    for (int t = 0; t < photon_count; ++t) {
        schedule.instructions.push_back(PulseInstruction::raman(2, 3, kHalfPi));
        schedule.instructions.push_back(PulseInstruction::feed(1, 3));
        schedule.instructions.push_back(PulseInstruction::feed(4, 2));
        schedule.instructions.push_back(
            PulseInstruction::emit({{1, Letter::L}, {4, Letter::R}}));
    }
    schedule.instructions.push_back(PulseInstruction::measure_last());
    schedule.expected_mode_count = photon_count;
    return schedule;
}

Schedule cluster2d_schedule(int columns) {
    if (columns < 2)
        throw std::invalid_argument("cluster2d_schedule: column count must be at least 2");
    Schedule schedule;
    schedule.name = "cluster2d-" + std::to_string(columns);
    schedule.level_count = 8;
    schedule.instructions.push_back(PulseInstruction::load(3));
    schedule.instructions.push_back(PulseInstruction::load(7));
    for (int t = 0; t < columns; ++t) {
        schedule.instructions.push_back(PulseInstruction::raman(2, 3, kHalfPi));
        schedule.instructions.push_back(PulseInstruction::raman(6, 7, kHalfPi));
        schedule.instructions.push_back(PulseInstruction::cphase(3, 7));
        schedule.instructions.push_back(PulseInstruction::feed(1, 3));
        schedule.instructions.push_back(PulseInstruction::feed(4, 2));
        schedule.instructions.push_back(PulseInstruction::feed(5, 7));
        schedule.instructions.push_back(PulseInstruction::feed(8, 6));
        schedule.instructions.push_back(
            PulseInstruction::emit({{1, Letter::L}, {4, Letter::R}}));
        schedule.instructions.push_back(
            PulseInstruction::emit({{5, Letter::L}, {8, Letter::R}}));
    }
    schedule.instructions.push_back(PulseInstruction::measure(2 * columns - 1));
    schedule.instructions.push_back(PulseInstruction::measure(2 * columns));
    schedule.expected_mode_count = 2 * columns;
    return schedule;
}

}  // namespace photonic
