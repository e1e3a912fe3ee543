#include "photonic/state.hpp"

#include <cmath>
#include <utility>

namespace photonic {

char letter_char(Letter l) {
    switch (l) {
        case Letter::Vac: return '-';
        case Letter::R: return 'R';
        case Letter::L: return 'L';
    }
    return '?';
}

std::string to_string(const BasisConfig& config) {
    std::string out;
    out.reserve(config.occ.size() + 1 + config.modes.size());
    for (std::uint8_t bit : config.occ)
        out.push_back(bit ? '1' : '0');
    out.push_back('|');
    for (Letter l : config.modes)
        out.push_back(letter_char(l));
    return out;
}

EnsembleState EnsembleState::from_amplitudes(int level_count, AmplitudeMap amplitudes,
                                             double prune_threshold) {
    if (level_count < 1)
        throw std::invalid_argument("level_count must be at least 1");

    EnsembleState state;
    state.level_count_ = level_count;
    state.prune_threshold_ = prune_threshold;

    int mode_count = -1;
    for (auto it = amplitudes.begin(); it != amplitudes.end();) {
        const BasisConfig& config = it->first;
        if (config.occ.size() != static_cast<std::size_t>(level_count))
            throw std::invalid_argument("configuration level count mismatch");
        for (std::uint8_t bit : config.occ)
            if (bit > 1)
                throw std::invalid_argument("occupation numbers must be 0 or 1");
        if (mode_count < 0)
            mode_count = static_cast<int>(config.modes.size());
        else if (config.modes.size() != static_cast<std::size_t>(mode_count))
            throw std::invalid_argument("configuration mode count mismatch");

        if (std::abs(it->second) < prune_threshold)
            it = amplitudes.erase(it);
        else
            ++it;
    }

    state.mode_count_ = mode_count < 0 ? 0 : mode_count;
    state.amplitudes_ = std::move(amplitudes);
    return state;
}

Amplitude EnsembleState::amplitude(const BasisConfig& config) const {
    auto it = amplitudes_.find(config);
    return it == amplitudes_.end() ? Amplitude{0.0, 0.0} : it->second;
}

EnsembleState new_state(int level_count, double prune_threshold) {
    if (level_count < 1)
        throw std::invalid_argument("level_count must be at least 1");
    BasisConfig vacuum;
    vacuum.occ.assign(static_cast<std::size_t>(level_count), 0);
    EnsembleState::AmplitudeMap amplitudes;
    amplitudes.emplace(std::move(vacuum), Amplitude{1.0, 0.0});
    return EnsembleState::from_amplitudes(level_count, std::move(amplitudes), prune_threshold);
}

double norm(const EnsembleState& state) {
    double sum = 0.0;
    for (const auto& [config, amp] : state.amplitudes())
        sum += std::norm(amp);
    return sum;
}

Amplitude inner_product(const EnsembleState& a, const EnsembleState& b) {
    if (a.level_count() != b.level_count() || a.mode_count() != b.mode_count())
        throw std::invalid_argument("inner_product: state shapes do not match");
    // Iterate the smaller support.
    const EnsembleState& lhs = a.amplitudes().size() <= b.amplitudes().size() ? a : b;
    const EnsembleState& rhs = &lhs == &a ? b : a;
    Amplitude sum{0.0, 0.0};
    for (const auto& [config, amp] : lhs.amplitudes()) {
        Amplitude other = rhs.amplitude(config);
        if (&lhs == &a)
            sum += std::conj(amp) * other;
        else
            sum += std::conj(other) * amp;
    }
    return sum;
}

void StateEnsemble::validate() const {
    double total = 0.0;
    for (const Branch& branch : branches) {
        if (!(branch.weight > 0.0))
            throw std::invalid_argument("ensemble branch weights must be positive");
        total += branch.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("ensemble branch weights must sum to one");
}

}  // namespace photonic
