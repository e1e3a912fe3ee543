#include "photonic/pulses.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace photonic {

namespace {

void check_level(const EnsembleState& state, int level, const char* op) {
    if (level < 1 || level > state.level_count())
        throw std::invalid_argument(std::string(op) + ": level index out of range");
}

void check_level_empty(const EnsembleState& state, int level, const char* op) {
    for (const auto& [config, amp] : state.amplitudes()) {
        if (config.occupied(level))
            throw BlockadeViolation(std::string(op) + ": level " + std::to_string(level) +
                                    " already occupied in support configuration " +
                                    to_string(config));
    }
}

void accumulate(EnsembleState::AmplitudeMap& map, BasisConfig config, Amplitude amp) {
    auto [it, inserted] = map.emplace(std::move(config), amp);
    if (!inserted)
        it->second += amp;
}

EnsembleState rebuild(const EnsembleState& reference, EnsembleState::AmplitudeMap map) {
    return EnsembleState::from_amplitudes(reference.level_count(), std::move(map),
                                          reference.prune_threshold());
}

}  // namespace

PulseInstruction PulseInstruction::load(int level) {
    PulseInstruction i;
    i.kind = PulseKind::Load;
    i.level = level;
    return i;
}

PulseInstruction PulseInstruction::superposition_load(int level, double theta, double phi) {
    PulseInstruction i;
    i.kind = PulseKind::SuperpositionLoad;
    i.level = level;
    i.theta = theta;
    i.phi = phi;
    return i;
}

PulseInstruction PulseInstruction::raman(int j, int j2, double theta, double phi) {
    PulseInstruction i;
    i.kind = PulseKind::Raman;
    i.level = j;
    i.level2 = j2;
    i.theta = theta;
    i.phi = phi;
    return i;
}

PulseInstruction PulseInstruction::feed(int target, int control) {
    PulseInstruction i;
    i.kind = PulseKind::Feed;
    i.level = target;
    i.level2 = control;
    return i;
}

PulseInstruction PulseInstruction::toggle(int level) {
    PulseInstruction i;
    i.kind = PulseKind::Toggle;
    i.level = level;
    return i;
}

PulseInstruction PulseInstruction::cphase(int j, int j2) {
    PulseInstruction i;
    i.kind = PulseKind::Cphase;
    i.level = j;
    i.level2 = j2;
    return i;
}

PulseInstruction PulseInstruction::emit(EmissionMap map) {
    PulseInstruction i;
    i.kind = PulseKind::Emit;
    i.emission_map = std::move(map);
    return i;
}

PulseInstruction PulseInstruction::random_emit() {
    PulseInstruction i;
    i.kind = PulseKind::RandomEmit;
    return i;
}

PulseInstruction PulseInstruction::measure(int mode_index) {
    PulseInstruction i;
    i.kind = PulseKind::Measure;
    i.mode_index = mode_index;
    return i;
}

PulseInstruction PulseInstruction::measure_last() {
    PulseInstruction i;
    i.kind = PulseKind::Measure;
    i.mode_index = 0;
    return i;
}

bool is_emission_kind(PulseKind kind) {
    return kind == PulseKind::Emit || kind == PulseKind::RandomEmit;
}

const char* kind_keyword(PulseKind kind) {
    switch (kind) {
        case PulseKind::Load: return "load";
        case PulseKind::SuperpositionLoad: return "supload";
        case PulseKind::Raman: return "raman";
        case PulseKind::Feed: return "feed";
        case PulseKind::Toggle: return "toggle";
        case PulseKind::Cphase: return "cphase";
        case PulseKind::Emit: return "emit";
        case PulseKind::RandomEmit: return "random-emit";
        case PulseKind::Measure: return "measure";
    }
    return "?";
}

EnsembleState load(const EnsembleState& state, int level) {
    check_level(state, level, "load");
    check_level_empty(state, level, "load");
    EnsembleState::AmplitudeMap out;
    for (const auto& [config, amp] : state.amplitudes()) {
        BasisConfig next = config;
        next.set(level, true);
        out.emplace(std::move(next), amp);
    }
    return rebuild(state, std::move(out));
}

EnsembleState superposition_load(const EnsembleState& state, int level, double theta,
                                 double phi) {
    check_level(state, level, "superposition_load");
    if (!std::isfinite(theta) || !std::isfinite(phi))
        throw std::invalid_argument("superposition_load: angles must be finite");
    check_level_empty(state, level, "superposition_load");

    const double keep = std::cos(theta / 2.0);
    const Amplitude move = std::polar(std::sin(theta / 2.0), phi);
    EnsembleState::AmplitudeMap out;
    for (const auto& [config, amp] : state.amplitudes()) {
        accumulate(out, config, keep * amp);
        BasisConfig fed = config;
        fed.set(level, true);
        accumulate(out, std::move(fed), move * amp);
    }
    return rebuild(state, std::move(out));
}

EnsembleState raman(const EnsembleState& state, int j, int j2, double theta, double phi) {
    check_level(state, j, "raman");
    check_level(state, j2, "raman");
    if (j == j2)
        throw std::invalid_argument("raman: levels must be distinct");
    if (!std::isfinite(theta) || !std::isfinite(phi))
        throw std::invalid_argument("raman: angles must be finite");

    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const Amplitude to_j2 = std::polar(s, phi);   // |j2> component fed from |j>
    const Amplitude to_j = std::polar(s, -phi);   // |j>  component fed from |j2>

    EnsembleState::AmplitudeMap out;
    for (const auto& [config, amp] : state.amplitudes()) {
        const bool in_j = config.occupied(j);
        const bool in_j2 = config.occupied(j2);
        if (in_j && in_j2)
            throw UnsupportedConfiguration("raman: both levels occupied in configuration " +
                                           to_string(config));
        if (!in_j && !in_j2) {
            accumulate(out, config, amp);
            continue;
        }
        BasisConfig swapped = config;
        swapped.set(j, !in_j);
        swapped.set(j2, !in_j2);
        if (in_j) {
            accumulate(out, config, -c * amp);
            accumulate(out, std::move(swapped), to_j2 * amp);
        } else {
            accumulate(out, std::move(swapped), to_j * amp);
            accumulate(out, config, c * amp);
        }
    }
    return rebuild(state, std::move(out));
}

EnsembleState feed(const EnsembleState& state, int target, int control) {
    check_level(state, target, "feed");
    check_level(state, control, "feed");
    if (target == control)
        throw std::invalid_argument("feed: target and control must differ");
    check_level_empty(state, target, "feed");

    EnsembleState::AmplitudeMap out;
    for (const auto& [config, amp] : state.amplitudes()) {
        BasisConfig next = config;
        if (!config.occupied(control))
            next.set(target, true);
        out.emplace(std::move(next), amp);
    }
    return rebuild(state, std::move(out));
}

EnsembleState toggle(const EnsembleState& state, int level) {
    check_level(state, level, "toggle");
    EnsembleState::AmplitudeMap out;
    for (const auto& [config, amp] : state.amplitudes()) {
        BasisConfig next = config;
        next.set(level, !config.occupied(level));
        out.emplace(std::move(next), amp);
    }
    return rebuild(state, std::move(out));
}

EnsembleState cphase(const EnsembleState& state, int j, int j2) {
    check_level(state, j, "cphase");
    check_level(state, j2, "cphase");
    EnsembleState::AmplitudeMap out;
    for (const auto& [config, amp] : state.amplitudes()) {
        const bool both_empty = !config.occupied(j) && !config.occupied(j2);
        out.emplace(config, both_empty ? amp : -amp);
    }
    return rebuild(state, std::move(out));
}

EnsembleState emit(const EnsembleState& state, const EmissionMap& map) {
    if (map.empty())
        throw std::invalid_argument("emit: emission map must not be empty");
    for (std::size_t i = 0; i < map.size(); ++i) {
        check_level(state, map[i].first, "emit");
        if (map[i].second != Letter::R && map[i].second != Letter::L)
            throw std::invalid_argument("emit: letters must be R or L");
        for (std::size_t k = i + 1; k < map.size(); ++k)
            if (map[i].first == map[k].first)
                throw std::invalid_argument("emit: emission map keys must be distinct");
    }

    EnsembleState::AmplitudeMap out;
    for (const auto& [config, amp] : state.amplitudes()) {
        int hit_level = 0;
        Letter letter = Letter::Vac;
        for (const auto& [level, mapped] : map) {
            if (!config.occupied(level))
                continue;
            if (hit_level != 0)
                throw AmbiguousEmission("emit: levels " + std::to_string(hit_level) + " and " +
                                        std::to_string(level) +
                                        " both occupied in configuration " + to_string(config));
            hit_level = level;
            letter = mapped;
        }
        BasisConfig next = config;
        if (hit_level != 0)
            next.set(hit_level, false);
        next.modes.push_back(letter);
        if (out.find(next) != out.end())
            throw UnsupportedConfiguration(
                "emit: two source configurations merge into " + to_string(next) +
                "; levels occupied in superposition must emit distinct letters");
        out.emplace(std::move(next), amp);
    }
    return rebuild(state, std::move(out));
}

EnsembleState append_mode(const EnsembleState& state, Letter letter) {
    EnsembleState::AmplitudeMap out;
    for (const auto& [config, amp] : state.amplitudes()) {
        BasisConfig next = config;
        next.modes.push_back(letter);
        out.emplace(std::move(next), amp);
    }
    return rebuild(state, std::move(out));
}

EnsembleState random_emit(const EnsembleState& state, std::mt19937_64& rng) {
    const Letter letter = (rng() >> 63) ? Letter::L : Letter::R;
    return append_mode(state, letter);
}

StateEnsemble random_emit_branches(const EnsembleState& state) {
    StateEnsemble ensemble;
    ensemble.branches.push_back({0.5, append_mode(state, Letter::R)});
    ensemble.branches.push_back({0.5, append_mode(state, Letter::L)});
    return ensemble;
}

std::array<double, 3> mode_weights(const EnsembleState& state, int mode_index) {
    if (mode_index < 1 || mode_index > state.mode_count())
        throw std::invalid_argument("mode index out of range");
    std::array<double, 3> weights{0.0, 0.0, 0.0};
    const std::size_t slot = static_cast<std::size_t>(mode_index) - 1;
    for (const auto& [config, amp] : state.amplitudes())
        weights[static_cast<std::size_t>(config.modes[slot])] += std::norm(amp);
    return weights;
}

MeasurementOutcome measure(const EnsembleState& state, int mode_index, std::mt19937_64& rng,
                           std::optional<Letter> postselect) {
    const std::array<double, 3> weights = mode_weights(state, mode_index);
    const double total = weights[0] + weights[1] + weights[2];
    if (total <= 0.0)
        throw std::invalid_argument("measure: state has zero norm");

    Letter outcome;
    if (postselect) {
        outcome = *postselect;
        if (weights[static_cast<std::size_t>(outcome)] / total < 1e-12)
            throw ImpossiblePostselection(
                "measure: postselected outcome has probability below 1e-12");
    } else {
        // Uniform deviate in [0, 1) from the top 53 bits.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        double cut = u * total;
        std::size_t pick = 0;
        while (pick < 2 && cut >= weights[pick]) {
            cut -= weights[pick];
            ++pick;
        }
        outcome = static_cast<Letter>(pick);
    }

    const double probability = weights[static_cast<std::size_t>(outcome)] / total;
    const double scale = 1.0 / std::sqrt(weights[static_cast<std::size_t>(outcome)]);
    const std::size_t slot = static_cast<std::size_t>(mode_index) - 1;

    EnsembleState::AmplitudeMap projected;
    for (const auto& [config, amp] : state.amplitudes())
        if (config.modes[slot] == outcome)
            projected.emplace(config, amp * scale);
    EnsembleState collapsed = EnsembleState::from_amplitudes(state.level_count(),
                                                             std::move(projected),
                                                             state.prune_threshold());
    return MeasurementOutcome{outcome, std::move(collapsed), probability};
}

}  // namespace photonic
