#pragma once

// Shared test helpers: a generator of random valid schedules built from
// protocol idioms, and small dense-algebra oracles that recompute
// library results independently.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "photonic/protocols.hpp"
#include "photonic/state.hpp"

namespace testsupport {

using photonic::Amplitude;
using photonic::BasisConfig;
using photonic::EnsembleState;
using photonic::Letter;
using photonic::PulseInstruction;
using photonic::Schedule;

// ---------------------------------------------------------------------
// Random valid schedules.
//
// Instructions are produced in blocks, each a known-valid idiom on
// levels that are empty when the block starts and empty again when it
// ends, so any concatenation of blocks is a valid schedule. Between
// blocks the generator sprinkles always-valid instructions
// (random-emit, cphase, measure of an already emitted mode).
// ---------------------------------------------------------------------

inline double random_angle(std::mt19937_64& rng) {
    // Half pi fractions (exercising the canonical serializer), half
    // plain decimals.
    if (rng() % 2 == 0) {
        const long long numerators[] = {1, 1, 1, 2, 3, -1, -3, 5};
        const long long denominators[] = {1, 2, 3, 4, 4, 2, 8, 6};
        const std::size_t pick = rng() % 8;
        const double pi = 3.14159265358979323846;
        return static_cast<double>(numerators[pick]) * pi /
               static_cast<double>(denominators[pick]);
    }
    std::uniform_real_distribution<double> dist(0.05, 3.1);
    return dist(rng);
}

inline Letter random_polarization(std::mt19937_64& rng) {
    return (rng() % 2 == 0) ? Letter::R : Letter::L;
}

/// Distinct letters for a two-level emission: the polarization must
/// record which of two superposed levels released the photon, or the
/// map would merge configurations.
inline std::pair<Letter, Letter> random_distinct_pair(std::mt19937_64& rng) {
    return (rng() % 2 == 0) ? std::pair{Letter::R, Letter::L}
                            : std::pair{Letter::L, Letter::R};
}

inline double random_phi(std::mt19937_64& rng) {
    return (rng() % 3 == 0) ? 0.0 : random_angle(rng);
}

/// Four distinct levels drawn from 1..level_count.
inline std::vector<int> pick_levels(std::mt19937_64& rng, int level_count, int how_many) {
    std::vector<int> all(static_cast<std::size_t>(level_count));
    for (int j = 1; j <= level_count; ++j)
        all[static_cast<std::size_t>(j) - 1] = j;
    for (std::size_t i = all.size(); i > 1; --i)
        std::swap(all[i - 1], all[rng() % i]);
    all.resize(static_cast<std::size_t>(how_many));
    return all;
}

/// Pair-production idiom: ends with both emitted modes appended and all
/// four levels empty again.
inline void append_pair_block(std::vector<PulseInstruction>& out, std::mt19937_64& rng,
                              int level_count) {
    const std::vector<int> lv = pick_levels(rng, level_count, 4);
    const int a = lv[0], b = lv[1], c = lv[2], d = lv[3];
    out.push_back(PulseInstruction::load(b));
    out.push_back(PulseInstruction::raman(b, c, random_angle(rng), random_phi(rng)));
    out.push_back(PulseInstruction::feed(d, c));
    out.push_back(PulseInstruction::feed(a, b));
    const auto [first_b, first_c] = random_distinct_pair(rng);
    out.push_back(PulseInstruction::emit({{b, first_b}, {c, first_c}}));
    const auto [second_a, second_d] = random_distinct_pair(rng);
    out.push_back(PulseInstruction::emit({{a, second_a}, {d, second_d}}));
}

/// Correlated-string idiom: number-encoded emissions conditioned on one
/// superposed level; ends with all levels empty.
inline void append_string_block(std::vector<PulseInstruction>& out, std::mt19937_64& rng,
                                int level_count) {
    const std::vector<int> lv = pick_levels(rng, level_count, 2);
    const int a = lv[0], b = lv[1];
    out.push_back(
        PulseInstruction::superposition_load(b, random_angle(rng), random_phi(rng)));
    const int repeats = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < repeats; ++k) {
        out.push_back(PulseInstruction::feed(a, b));
        out.push_back(PulseInstruction::emit({{a, random_polarization(rng)}}));
    }
    out.push_back(PulseInstruction::toggle(b));
    out.push_back(PulseInstruction::emit({{b, random_polarization(rng)}}));
}

/// Chain idiom: repeated transfer/emit rounds with a conditional phase,
/// closed by emitting the two chain levels (exactly one is occupied).
inline void append_chain_block(std::vector<PulseInstruction>& out, std::mt19937_64& rng,
                               int level_count) {
    const std::vector<int> lv = pick_levels(rng, level_count, 4);
    const int a = lv[0], b = lv[1], c = lv[2], d = lv[3];
    out.push_back(PulseInstruction::load(c));
    const int rounds = 1 + static_cast<int>(rng() % 2);
    for (int k = 0; k < rounds; ++k) {
        out.push_back(PulseInstruction::raman(b, c, random_angle(rng), random_phi(rng)));
        out.push_back(PulseInstruction::cphase(b, c));
        out.push_back(PulseInstruction::feed(a, c));
        out.push_back(PulseInstruction::feed(d, b));
        const auto [round_a, round_d] = random_distinct_pair(rng);
        out.push_back(PulseInstruction::emit({{a, round_a}, {d, round_d}}));
        // Swap roles so the next round starts from the same shape.
        out.push_back(PulseInstruction::raman(c, b, random_angle(rng), 0.0));
    }
    const auto [last_b, last_c] = random_distinct_pair(rng);
    out.push_back(PulseInstruction::emit({{b, last_b}, {c, last_c}}));
}

inline Schedule random_schedule(std::mt19937_64& rng) {
    Schedule schedule;
    schedule.name = "random";
    schedule.level_count = 4 + static_cast<int>(rng() % 5);  // 4..8
    const int blocks = 1 + static_cast<int>(rng() % 3);
    for (int blk = 0; blk < blocks; ++blk) {
        switch (rng() % 3) {
        case 0:
            append_pair_block(schedule.instructions, rng, schedule.level_count);
            break;
        case 1:
            append_string_block(schedule.instructions, rng, schedule.level_count);
            break;
        default:
            append_chain_block(schedule.instructions, rng, schedule.level_count);
            break;
        }
        if (rng() % 3 == 0)
            schedule.instructions.push_back(PulseInstruction::random_emit());
        const int emitted = photonic::emission_count(schedule.instructions);
        if (rng() % 3 == 0 && emitted > 0) {
            if (rng() % 2 == 0)
                schedule.instructions.push_back(PulseInstruction::measure_last());
            else
                schedule.instructions.push_back(PulseInstruction::measure(
                    1 + static_cast<int>(rng() % static_cast<unsigned>(emitted))));
        }
    }
    schedule.expected_mode_count = photonic::emission_count(schedule.instructions);
    return schedule;
}

// ---------------------------------------------------------------------
// Dense oracles. States whose support uses only the letters {zero, one}
// on the first `qubit_count` modes embed into a 2^n vector; mode 1 is
// the most significant digit.
// ---------------------------------------------------------------------

using DenseVector = std::vector<Amplitude>;

/// Collapses a sparse polarized state onto 2^n dense entries, summing
/// amplitudes that share the first `qubit_count` mode letters (the
/// atomic part and any further modes must be constant across the
/// support for this to be faithful; tests arrange that).
inline DenseVector dense_from_state(const EnsembleState& state, int qubit_count,
                                    Letter zero_letter) {
    DenseVector dense(std::size_t{1} << qubit_count, Amplitude{0.0, 0.0});
    for (const auto& [config, amp] : state.amplitudes()) {
        std::size_t index = 0;
        for (int m = 0; m < qubit_count; ++m) {
            const Letter letter = config.modes[static_cast<std::size_t>(m)];
            index = (index << 1) | (letter == zero_letter ? 0u : 1u);
        }
        dense[index] += amp;
    }
    return dense;
}

using DenseMatrix = std::vector<std::vector<Amplitude>>;

inline DenseMatrix dense_identity(std::size_t dim) {
    DenseMatrix m(dim, std::vector<Amplitude>(dim, Amplitude{0.0, 0.0}));
    for (std::size_t i = 0; i < dim; ++i)
        m[i][i] = 1.0;
    return m;
}

/// Kronecker product of 2x2 single-qubit operators, mode 1 leftmost.
inline DenseMatrix kron_chain(const std::vector<std::array<Amplitude, 4>>& factors) {
    DenseMatrix result = dense_identity(1);
    for (const auto& f : factors) {
        DenseMatrix next(result.size() * 2,
                         std::vector<Amplitude>(result.size() * 2, Amplitude{0.0, 0.0}));
        for (std::size_t i = 0; i < result.size(); ++i)
            for (std::size_t j = 0; j < result.size(); ++j)
                for (std::size_t r = 0; r < 2; ++r)
                    for (std::size_t c = 0; c < 2; ++c)
                        next[2 * i + r][2 * j + c] = result[i][j] * f[2 * r + c];
        result = std::move(next);
    }
    return result;
}

inline Amplitude dense_expectation(const DenseVector& v, const DenseMatrix& op) {
    Amplitude total{0.0, 0.0};
    for (std::size_t i = 0; i < v.size(); ++i) {
        Amplitude row{0.0, 0.0};
        for (std::size_t j = 0; j < v.size(); ++j)
            row += op[i][j] * v[j];
        total += std::conj(v[i]) * row;
    }
    return total;
}

}  // namespace testsupport
