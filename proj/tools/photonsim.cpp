// photonsim: command-line driver for the pulse-schedule simulator.
//
// Subcommands:
//   run       execute a schedule (builtin protocol or .pulse file), emit JSON
//   verify    check a protocol run (or a saved result) against its target
//   emission  sample an atom cloud and scan the directional emission pattern
//   parse     lint a schedule file, reporting span diagnostics
//
// Exit codes: 0 success/pass, 1 usage error, 2 domain error (bad schedule,
// failed verification, invalid physics parameters).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "photonic/dsl.hpp"
#include "photonic/emission.hpp"
#include "photonic/protocols.hpp"
#include "photonic/verify.hpp"

using nlohmann::json;
using namespace photonic;

namespace {

constexpr int kSchemaVersion = 1;
constexpr double kPi = 3.14159265358979323846;

/// Signals an exit code from a helper that already printed its message.
struct ExitWith {
    int code;
};

struct ProtocolOptions {
    std::string name;
    int modes = 3;    // ghz
    int photons = 4;  // cluster1d
    int columns = 2;  // cluster2d
    int slot = 1;     // trine
};

struct Tolerances {
    double fidelity = 1e-12;
    double weight = 1e-12;
    double distance = 1e-12;
    double stabilizer = 1e-10;
};

Schedule make_builtin(const ProtocolOptions& opts) {
    if (opts.name == "bell")
        return bell_schedule();
    if (opts.name == "ghz")
        return ghz_schedule(opts.modes);
    if (opts.name == "trine")
        return trine_schedule(opts.slot);
    if (opts.name == "cluster1d")
        return cluster1d_schedule(opts.photons);
    if (opts.name == "cluster2d")
        return cluster2d_schedule(opts.columns);
    throw std::invalid_argument("unknown protocol: " + opts.name);
}

void print_diagnostics(const std::string& path, const std::vector<ParseError>& errors) {
    for (const auto& error : errors) {
        std::cerr << path << ":" << error.span.line << ":" << error.span.column << ": "
                  << error.message;
        if (!error.expected.empty())
            std::cerr << " (expected " << error.expected << ")";
        std::cerr << "\n";
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Schedule schedule_from_file(const std::string& path) {
    const ParseResult parsed = parse_schedule(read_file(path));
    if (!parsed.ok()) {
        print_diagnostics(path, parsed.errors);
        throw ExitWith{2};
    }
    return parsed.schedule;
}

void write_output(const std::string& text, const std::string& out_path) {
    std::cout << text;
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write file: " + out_path);
        out << text;
    }
}

// ---------------------------------------------------------------------
// JSON rendering of run results.
// ---------------------------------------------------------------------

json state_json(const EnsembleState& state) {
    json amplitudes = json::object();
    for (const auto& [config, amp] : state.amplitudes())
        amplitudes[to_string(config)] = json::array({amp.real(), amp.imag()});
    return json{{"levels", state.level_count()},
                {"modes", state.mode_count()},
                {"amplitudes", std::move(amplitudes)}};
}

json records_json(const std::vector<MeasurementRecord>& records) {
    json list = json::array();
    for (const auto& record : records)
        list.push_back({{"mode", record.mode_index},
                        {"outcome", std::string(1, letter_char(record.outcome))},
                        {"probability", record.probability}});
    return list;
}

// ---------------------------------------------------------------------
// Verification against protocol targets.
// ---------------------------------------------------------------------

/// Branch ensemble plus the per-branch measurement outcomes (in measure
/// instruction order) — all a verifier needs, whether the branches come
/// from a fresh run or from a saved result file.
struct VerificationInput {
    StateEnsemble ensemble;
    std::vector<std::vector<Letter>> outcomes;
};

VerificationInput input_from_result(const SimResult& result) {
    VerificationInput input;
    for (const auto& branch : result.branches) {
        input.ensemble.branches.push_back({branch.weight, branch.state});
        std::vector<Letter> outcomes;
        for (const auto& record : branch.records)
            outcomes.push_back(record.outcome);
        input.outcomes.push_back(std::move(outcomes));
    }
    return input;
}

Letter letter_from_string(const std::string& text) {
    if (text == "R")
        return Letter::R;
    if (text == "L")
        return Letter::L;
    if (text == "-")
        return Letter::Vac;
    throw std::invalid_argument("malformed outcome letter: " + text);
}

BasisConfig config_from_string(const std::string& text) {
    const std::size_t bar = text.find('|');
    if (bar == std::string::npos)
        throw std::invalid_argument("malformed configuration key: " + text);
    BasisConfig config;
    for (const char c : text.substr(0, bar)) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("malformed configuration key: " + text);
        config.occ.push_back(c == '1' ? 1 : 0);
    }
    for (const char c : text.substr(bar + 1)) {
        if (c == 'R')
            config.modes.push_back(Letter::R);
        else if (c == 'L')
            config.modes.push_back(Letter::L);
        else if (c == '-')
            config.modes.push_back(Letter::Vac);
        else
            throw std::invalid_argument("malformed configuration key: " + text);
    }
    return config;
}

EnsembleState state_from_json(const json& jstate) {
    const int levels = jstate.at("levels").get<int>();
    EnsembleState::AmplitudeMap amplitudes;
    for (const auto& [key, value] : jstate.at("amplitudes").items())
        amplitudes[config_from_string(key)] =
            Amplitude(value.at(0).get<double>(), value.at(1).get<double>());
    return EnsembleState::from_amplitudes(levels, std::move(amplitudes));
}

VerificationInput input_from_result_file(const std::string& path) {
    const json doc = json::parse(read_file(path));
    VerificationInput input;
    for (const auto& branch : doc.at("branches")) {
        if (!branch.contains("state"))
            throw std::invalid_argument(
                "result file has no state dump; rerun with --dump-state");
        input.ensemble.branches.push_back(
            {branch.at("weight").get<double>(), state_from_json(branch.at("state"))});
        std::vector<Letter> outcomes;
        if (branch.contains("records"))
            for (const auto& record : branch.at("records"))
                outcomes.push_back(letter_from_string(record.at("outcome").get<std::string>()));
        input.outcomes.push_back(std::move(outcomes));
    }
    if (input.ensemble.branches.empty())
        throw std::invalid_argument("result file has no branches");
    input.ensemble.validate();
    return input;
}

int result_mode_count(const VerificationInput& input) {
    return input.ensemble.branches.front().state.mode_count();
}

void require_mode_count(const VerificationInput& input, const std::string& target,
                        int expected) {
    const int actual = result_mode_count(input);
    if (actual != expected)
        throw std::invalid_argument("target/mode-count mismatch: " + target + " expects " +
                                    std::to_string(expected) + " modes, result has " +
                                    std::to_string(actual));
}

FrozenClusterCorrection frozen_path_correction(double tolerance) {
    const SimResult seed_run = run_schedule(cluster1d_schedule(3), RunMode::branch());
    const VerificationInput input = input_from_result(seed_run);
    std::vector<std::pair<std::vector<Letter>, EnsembleState>> branches;
    for (std::size_t i = 0; i < input.ensemble.branches.size(); ++i)
        branches.push_back({input.outcomes[i], input.ensemble.branches[i].state});
    return freeze_cluster_correction(branches, GraphSpec::path(2), 1, tolerance);
}

FrozenClusterCorrection frozen_ladder_correction(double tolerance) {
    const SimResult seed_run = run_schedule(cluster2d_schedule(2), RunMode::branch());
    const VerificationInput input = input_from_result(seed_run);
    std::vector<std::pair<std::vector<Letter>, EnsembleState>> branches;
    for (std::size_t i = 0; i < input.ensemble.branches.size(); ++i)
        branches.push_back({input.outcomes[i], input.ensemble.branches[i].state});
    return freeze_cluster_correction(branches, GraphSpec::ladder(1), 2, tolerance);
}

double min_stabilizer(const VerificationInput& input, const GraphSpec& graph,
                      const FrozenClusterCorrection& frozen) {
    double minimum = 2.0;
    for (std::size_t i = 0; i < input.ensemble.branches.size(); ++i) {
        const LocalCorrection correction =
            frozen.expand(graph.vertex_count, input.outcomes.at(i));
        for (const double e : stabilizer_expectations(input.ensemble.branches[i].state,
                                                      graph, correction))
            minimum = std::min(minimum, e);
    }
    return minimum;
}

json run_verification(const std::string& target, const VerificationInput& input,
                      const ProtocolOptions& sizes, const Tolerances& tols) {
    if (target == "bell") {
        require_mode_count(input, target, 2);
        const double f = fidelity(input.ensemble, TargetState::bell_psi_minus());
        return {{"kind", "bell"},
                {"fidelity", f},
                {"tolerance", tols.fidelity},
                {"pass", f >= 1.0 - tols.fidelity}};
    }
    if (target == "ghz") {
        require_mode_count(input, target, sizes.modes);
        const GhzReport report = ghz_correlation_check(input.ensemble, sizes.modes);
        const bool pass = std::abs(report.all_photon - 0.5) <= tols.weight &&
                          std::abs(report.all_vacuum - 0.5) <= tols.weight &&
                          report.mixed <= tols.weight;
        return {{"kind", "ghz"},          {"modes", sizes.modes},
                {"all_photon", report.all_photon}, {"all_vacuum", report.all_vacuum},
                {"mixed", report.mixed},  {"tolerance", tols.weight},
                {"pass", pass}};
    }
    if (target == "trine") {
        require_mode_count(input, target, 3);
        const DensityMatrix rho = reduced_density(input.ensemble, {1, 2, 3});
        const double distance = trace_distance(rho, trine_density(sizes.slot));
        return {{"kind", "trine"},
                {"slot", sizes.slot},
                {"trace_distance", distance},
                {"tolerance", tols.distance},
                {"pass", distance < tols.distance}};
    }
    if (target == "cluster1d") {
        require_mode_count(input, target, sizes.photons);
        const double minimum = min_stabilizer(input, GraphSpec::path(sizes.photons - 1),
                                              frozen_path_correction(tols.stabilizer));
        return {{"kind", "cluster1d"},
                {"photons", sizes.photons},
                {"min_stabilizer", minimum},
                {"tolerance", tols.stabilizer},
                {"pass", minimum >= 1.0 - tols.stabilizer}};
    }
    if (target == "cluster2d") {
        require_mode_count(input, target, 2 * sizes.columns);
        const double minimum =
            min_stabilizer(input, GraphSpec::ladder(sizes.columns - 1),
                           frozen_ladder_correction(tols.stabilizer));
        return {{"kind", "cluster2d"},
                {"columns", sizes.columns},
                {"min_stabilizer", minimum},
                {"tolerance", tols.stabilizer},
                {"pass", minimum >= 1.0 - tols.stabilizer}};
    }
    throw std::invalid_argument("unknown verification target: " + target);
}

// ---------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------

int cmd_run(const std::string& schedule_path, const ProtocolOptions& protocol,
            bool have_protocol, const std::string& mode_name, std::uint64_t seed,
            bool have_seed, bool dump_state, bool emit_dsl, const std::string& out_path,
            const Tolerances& tols) {
    if (have_protocol == !schedule_path.empty()) {
        std::cerr << "usage: pass exactly one schedule source (--protocol or --schedule)\n";
        return 1;
    }
    const Schedule schedule =
        have_protocol ? make_builtin(protocol) : schedule_from_file(schedule_path);

    if (emit_dsl) {
        write_output(serialize_schedule(schedule), out_path);
        return 0;
    }

    const bool trajectory = mode_name == "trajectory";
    if (trajectory && !have_seed) {
        std::cerr << "usage: --seed is required in trajectory mode\n";
        return 1;
    }
    const RunMode mode = trajectory ? RunMode::trajectory(seed) : RunMode::branch();

    SimResult result;
    try {
        result = run_schedule(schedule, mode);
    } catch (const ScheduleError& error) {
        std::cerr << "schedule error: " << error.what() << "\n";
        return 2;
    }

    json out;
    out["schema_version"] = kSchemaVersion;
    out["schedule"] = {{"name", schedule.name},
                       {"levels", schedule.level_count},
                       {"instructions", schedule.instructions.size()},
                       {"modes", schedule.expected_mode_count}};
    out["mode"] = mode_name;
    if (trajectory)
        out["seed"] = seed;
    out["duration_s"] = result.duration_s;
    json branches = json::array();
    for (const auto& branch : result.branches) {
        json jbranch = {{"weight", branch.weight}, {"records", records_json(branch.records)}};
        if (dump_state)
            jbranch["state"] = state_json(branch.state);
        branches.push_back(std::move(jbranch));
    }
    out["branches"] = std::move(branches);
    if (have_protocol && !trajectory)
        out["verification"] =
            run_verification(protocol.name, input_from_result(result), protocol, tols);

    write_output(out.dump(2) + "\n", out_path);
    return 0;
}

int cmd_verify(const ProtocolOptions& protocol, bool have_protocol,
               const std::string& result_path, std::string target,
               const std::string& out_path, const Tolerances& tols) {
    if (have_protocol == !result_path.empty()) {
        std::cerr << "usage: pass exactly one of --protocol or --result\n";
        return 1;
    }
    ProtocolOptions sizes = protocol;
    VerificationInput input;
    if (have_protocol) {
        target = protocol.name;
        input = input_from_result(run_schedule(make_builtin(protocol), RunMode::branch()));
    } else {
        if (target.empty()) {
            std::cerr << "usage: --result requires --target\n";
            return 1;
        }
        input = input_from_result_file(result_path);
        // Infer the instance size from the stored mode count.
        const int modes = result_mode_count(input);
        sizes.modes = modes;
        sizes.photons = modes;
        if (target == "cluster2d") {
            if (modes % 2 != 0)
                throw std::invalid_argument(
                    "target/mode-count mismatch: cluster2d expects an even mode count");
            sizes.columns = modes / 2;
        }
    }

    const json verification = run_verification(target, input, sizes, tols);
    json out;
    out["schema_version"] = kSchemaVersion;
    out["target"] = target;
    out["verification"] = verification;
    write_output(out.dump(2) + "\n", out_path);
    return verification.at("pass").get<bool>() ? 0 : 2;
}

int cmd_emission(std::size_t atoms, double diameter, const std::string& geometry_name,
                 double wavelength, std::uint64_t seed, int grid, double max_diameter,
                 const std::string& out_path, const std::string& format) {
    const CloudGeometry geometry =
        geometry_name == "gaussian" ? CloudGeometry::Gaussian : CloudGeometry::UniformBall;
    const AtomCloud cloud = sample_cloud(atoms, geometry, diameter, seed, max_diameter);

    const double k_magnitude = 2.0 * kPi / wavelength;
    WaveVectorLedger ledger;
    ledger.entries = {{{0.0, 0.0, k_magnitude}, +1}, {{0.0, 0.0, k_magnitude}, -1}};
    ledger.excitation_k = {0.0, 0.0, k_magnitude};
    const Vec3 k_match = resultant_wavevector(ledger);

    const double matched = emission_probability(cloud, k_match, k_match);
    const EmissionPattern pattern = pattern_scan(cloud, k_match, k_magnitude, grid);
    const EmissionSample& peak = pattern.peak();

    // Background: directions more than 0.3 rad away from the
    // phase-matched axis.
    double background_sum = 0.0;
    int background_count = 0;
    for (const auto& sample : pattern.samples) {
        if (std::acos(std::clamp(sample.direction.z, -1.0, 1.0)) > 0.3) {
            background_sum += sample.probability;
            ++background_count;
        }
    }
    const double background =
        background_count > 0 ? background_sum / background_count : 0.0;

    json out;
    out["schema_version"] = kSchemaVersion;
    out["atoms"] = atoms;
    out["geometry"] = geometry_name;
    out["diameter_um"] = diameter;
    out["wavelength_um"] = wavelength;
    out["seed"] = seed;
    out["grid"] = grid;
    out["phase_matched_probability"] = matched;
    out["peak"] = {{"theta", peak.theta}, {"phi", peak.phi}, {"probability", peak.probability}};
    out["background_mean"] = background;
    out["peak_to_background"] = background > 0.0 ? matched / background : 0.0;
    std::cout << out.dump(2) << "\n";

    if (!out_path.empty()) {
        std::ofstream file(out_path, std::ios::binary);
        if (!file)
            throw std::runtime_error("cannot write file: " + out_path);
        if (format == "json") {
            json samples = json::array();
            for (const auto& sample : pattern.samples)
                samples.push_back({{"theta", sample.theta},
                                   {"phi", sample.phi},
                                   {"probability", sample.probability}});
            const json doc = {{"schema_version", kSchemaVersion},
                              {"samples", std::move(samples)}};
            file << doc.dump(2) << "\n";
        } else {
            file << "theta,phi,probability\n";
            char row[128];
            for (const auto& sample : pattern.samples) {
                std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g\n", sample.theta,
                              sample.phi, sample.probability);
                file << row;
            }
        }
    }
    return 0;
}

int cmd_parse(const std::string& path) {
    const ParseResult parsed = parse_schedule(read_file(path));
    if (!parsed.ok()) {
        print_diagnostics(path, parsed.errors);
        return 2;
    }
    std::cout << path << ": ok, " << parsed.schedule.instructions.size()
              << " instructions, " << parsed.schedule.level_count << " levels, "
              << parsed.schedule.expected_mode_count << " modes\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic multi-mode photon source simulator"};
    app.require_subcommand(1);

    ProtocolOptions protocol;
    Tolerances tols;
    std::string schedule_path;
    std::string result_path;
    std::string target;
    std::string mode_name = "branch";
    std::string out_path;
    std::string format = "csv";
    std::string geometry_name = "ball";
    std::uint64_t seed = 1;
    bool dump_state = false;
    bool emit_dsl = false;
    std::size_t atoms = 1000;
    double diameter = kDefaultDiameterUm;
    double max_diameter = kDefaultDiameterUm;
    double wavelength = kDefaultWavelengthUm;
    int grid = 24;
    std::string parse_path;

    const std::vector<std::string> protocol_names = {"bell", "ghz", "trine", "cluster1d",
                                                     "cluster2d"};

    CLI::App* run_cmd = app.add_subcommand("run", "Execute a pulse schedule");
    CLI::Option* run_protocol =
        run_cmd->add_option("--protocol", protocol.name, "Builtin protocol")
            ->check(CLI::IsMember(protocol_names));
    run_cmd->add_option("--schedule", schedule_path, "Schedule text file");
    run_cmd->add_option("--modes", protocol.modes, "Mode count for ghz");
    run_cmd->add_option("--photons", protocol.photons, "Photon count for cluster1d");
    run_cmd->add_option("--columns", protocol.columns, "Column count for cluster2d");
    run_cmd->add_option("--slot", protocol.slot, "Mixed slot for trine (1-3)");
    run_cmd->add_option("--mode", mode_name, "Execution mode")
        ->check(CLI::IsMember({"branch", "trajectory"}));
    CLI::Option* run_seed =
        run_cmd->add_option("--seed", seed, "Random seed (trajectory mode)");
    run_cmd->add_flag("--dump-state", dump_state, "Include state amplitudes in the output");
    run_cmd->add_flag("--emit-dsl", emit_dsl, "Print the schedule text instead of running");
    run_cmd->add_option("--out", out_path, "Also write the output to this file");
    run_cmd->add_option("--fidelity-tol", tols.fidelity, "Fidelity tolerance");
    run_cmd->add_option("--stabilizer-tol", tols.stabilizer, "Stabilizer tolerance");
    run_cmd->add_option("--distance-tol", tols.distance, "Trace-distance tolerance");

    CLI::App* verify_cmd = app.add_subcommand("verify", "Verify a protocol against its target");
    CLI::Option* verify_protocol =
        verify_cmd->add_option("--protocol", protocol.name, "Builtin protocol to run and check")
            ->check(CLI::IsMember(protocol_names));
    verify_cmd->add_option("--result", result_path, "Saved run result (with state dump)");
    verify_cmd->add_option("--target", target, "Target for --result")
        ->check(CLI::IsMember(protocol_names));
    verify_cmd->add_option("--modes", protocol.modes, "Mode count for ghz");
    verify_cmd->add_option("--photons", protocol.photons, "Photon count for cluster1d");
    verify_cmd->add_option("--columns", protocol.columns, "Column count for cluster2d");
    verify_cmd->add_option("--slot", protocol.slot, "Mixed slot for trine (1-3)");
    verify_cmd->add_option("--out", out_path, "Also write the verdict to this file");
    verify_cmd->add_option("--fidelity-tol", tols.fidelity, "Fidelity tolerance");
    verify_cmd->add_option("--stabilizer-tol", tols.stabilizer, "Stabilizer tolerance");
    verify_cmd->add_option("--distance-tol", tols.distance, "Trace-distance tolerance");

    CLI::App* emission_cmd =
        app.add_subcommand("emission", "Scan the directional emission pattern");
    emission_cmd->add_option("--atoms", atoms, "Atom count K")->required();
    emission_cmd->add_option("--diameter", diameter, "Cloud diameter in um");
    emission_cmd->add_option("--geometry", geometry_name, "Cloud geometry")
        ->check(CLI::IsMember({"ball", "gaussian"}));
    emission_cmd->add_option("--wavelength", wavelength, "Wavelength in um");
    emission_cmd->add_option("--seed", seed, "Random seed for cloud sampling");
    emission_cmd->add_option("--grid", grid, "Azimuthal points per great circle (>= 8)");
    emission_cmd->add_option("--max-diameter", max_diameter,
                             "Blockade bound override for --diameter");
    emission_cmd->add_option("--out", out_path, "Pattern output file");
    emission_cmd->add_option("--format", format, "Pattern file format")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* parse_cmd = app.add_subcommand("parse", "Lint a schedule file");
    parse_cmd->add_option("file", parse_path, "Schedule text file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::CallForAllHelp& help) {
        return app.exit(help);
    } catch (const CLI::CallForVersion& version) {
        return app.exit(version);
    } catch (const CLI::ParseError& error) {
        app.exit(error);
        return 1;
    }

    try {
        if (*run_cmd)
            return cmd_run(schedule_path, protocol, run_protocol->count() > 0, mode_name,
                           seed, run_seed->count() > 0, dump_state, emit_dsl, out_path,
                           tols);
        if (*verify_cmd)
            return cmd_verify(protocol, verify_protocol->count() > 0, result_path, target,
                              out_path, tols);
        if (*emission_cmd)
            return cmd_emission(atoms, diameter, geometry_name, wavelength, seed, grid,
                                max_diameter, out_path, format);
        if (*parse_cmd)
            return cmd_parse(parse_path);
    } catch (const ExitWith& exit_with) {
        return exit_with.code;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    }
    return 1;
}
