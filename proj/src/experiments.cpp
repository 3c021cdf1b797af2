#include "pai/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "pai/decomposition.hpp"
#include "pai/errors.hpp"
#include "pai/estimate.hpp"
#include "pai/models.hpp"
#include "pai/notch.hpp"

#ifndef PAI_VERSION
#define PAI_VERSION "0.0.0"
#endif

namespace pai::experiments {

namespace {

const Json& defaults_table() {
    static const Json table = {
        {"decompose", {{"angle", 0.1}, {"bits", 7}, {"grid_file", ""}, {"grid_angles", Json::array()}}},
        {"overhead",
         {{"bits_min", 4},
          {"bits_max", 12},
          {"nu_values", {0, 1, 4, 16, 64, 256, 1024, 4096, 16384, 65536, 262144, 1048576}},
          {"include_max_gates", true},
          {"output", "overhead"}}},
        {"trotter",
         {{"n_qubits", 12},
          {"coupling", 0.3},
          {"model_seed", 1},
          {"total_time", 1.0},
          {"layers", 50},
          {"initial_state", "neel"},
          {"bits", 7},
          {"grid_file", ""},
          {"grid_angles", Json::array()},
          {"observable_qubit", 0},
          {"variants", 10000},
          {"shots_per_variant", 10},
          {"batch_size", 1000},
          {"n_batches", 10000},
          {"master_seed", 2024},
          {"output", "trotter"}}},
        {"vqe",
         {{"n_qubits", 6},
          {"coupling", 0.3},
          {"model_seed", 1},
          {"layers", 3},
          {"initial_state", "zero"},
          {"bits", 5},
          {"grid_file", ""},
          {"grid_angles", Json::array()},
          {"learning_rate", 0.05},
          {"iterations", 300},
          {"shots", 24000},
          {"variants", 100},
          {"modes", {"exact", "nearest", "pai"}},
          {"master_seed", 2024},
          {"output", "vqe"}}},
        {"fidelity-decay",
         {{"n_qubits", 12},
          {"coupling", 0.3},
          {"model_seed", 1},
          {"total_time", 1.0},
          {"layers", 50},
          {"initial_state", "neel"},
          {"bits", 7},
          {"grid_file", ""},
          {"grid_angles", Json::array()},
          {"variants", 200},
          {"points", 25},
          {"master_seed", 2024},
          {"output", "fidelity"}}},
        {"rms",
         {{"n_qubits", 4},
          {"coupling", 0.3},
          {"model_seed", 1},
          {"total_time", 0.3},
          {"layers", 4},
          {"initial_state", "neel"},
          {"bits", 5},
          {"grid_file", ""},
          {"grid_angles", Json::array()},
          {"observable_qubit", 0},
          {"shot_grid", {1, 10, 100, 316, 1000, 3162, 10000, 31623, 100000}},
          {"repeats", 200},
          {"master_seed", 2024},
          {"output", "rms"}}},
    };
    return table;
}

bool same_kind(const Json& expected, const Json& actual) {
    if (expected.is_number_integer()) {
        return actual.is_number_integer();
    }
    if (expected.is_number()) {
        return actual.is_number();
    }
    return expected.type() == actual.type();
}

template <typename T>
T field(const Json& cfg, const char* key) {
    try {
        return cfg.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

std::size_t positive(const Json& cfg, const char* key) {
    const auto v = field<long long>(cfg, key);
    if (v < 1) {
        throw ConfigError(std::string("config field '") + key + "' must be >= 1");
    }
    return static_cast<std::size_t>(v);
}

std::string number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_preamble(const Json& cfg) {
    return "# pai " + version() + "\n# config " + cfg.dump() + "\n";
}

NotchGrid grid_from(const Json& cfg) {
    try {
        const auto file = field<std::string>(cfg, "grid_file");
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in) {
                throw ConfigError("cannot open grid file '" + file + "'");
            }
            Json angles;
            try {
                in >> angles;
            } catch (const Json::exception& e) {
                throw ConfigError("grid file '" + file + "' is not valid JSON: " + e.what());
            }
            if (!angles.is_array()) {
                throw ConfigError("grid file must hold a JSON array of radians");
            }
            return NotchGrid::from_angles(field<std::vector<double>>(Json{{"a", angles}}, "a"));
        }
        const auto angles = field<std::vector<double>>(cfg, "grid_angles");
        if (!angles.empty()) {
            return NotchGrid::from_angles(angles);
        }
        return NotchGrid::uniform(field<int>(cfg, "bits"));
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid notch grid: ") + e.what());
    }
}

Json grid_json(const NotchGrid& grid) {
    if (grid.is_uniform()) {
        return {{"kind", "uniform"}, {"bits", grid.bits()}, {"delta", grid.delta_max()}};
    }
    return {{"kind", "explicit"}, {"angles", grid.explicit_angles()}, {"delta_max", grid.delta_max()}};
}

SpinRingModel model_from(const Json& cfg) {
    try {
        return spin_ring(field<int>(cfg, "n_qubits"), field<double>(cfg, "coupling"),
                         field<std::uint64_t>(cfg, "model_seed"));
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

Circuit trotter_from(const Json& cfg, const SpinRingModel& model) {
    const TrotterSpec spec{field<double>(cfg, "total_time"), static_cast<int>(positive(cfg, "layers"))};
    return trotter_circuit(model, spec, initial_state_from_string(field<std::string>(cfg, "initial_state")));
}

PauliString observable_from(const Json& cfg, int n_qubits) {
    const int q = field<int>(cfg, "observable_qubit");
    if (q < 0 || q >= n_qubits) {
        throw ConfigError("observable_qubit out of range");
    }
    return PauliString::on(n_qubits, {q}, 'Z');
}

Json estimate_json(const EstimateResult& r) {
    return {{"mean", r.mean},
            {"std_error", r.std_error},
            {"variant_std_error", r.variant_std_error},
            {"second_moment", r.second_moment},
            {"n_shots", r.n_shots},
            {"n_variants", r.n_variants},
            {"overhead_bound", r.overhead_bound}};
}

Json batch_json(const BatchStats& b) {
    return {{"mean", b.mean}, {"width", b.width}, {"batch_size", b.batch_size}, {"n_batches", b.n_batches}};
}

}  // namespace

std::string version() {
    return PAI_VERSION;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"decompose", "overhead", "trotter", "vqe", "fidelity-decay", "rms"};
    return names;
}

Json default_config(const std::string& command) {
    const Json& table = defaults_table();
    if (!table.contains(command)) {
        throw ConfigError("unknown command '" + command + "'");
    }
    return table.at(command);
}

Json resolve_config(const std::string& command, const Json& overrides) {
    Json cfg = default_config(command);
    if (overrides.is_null()) {
        return cfg;
    }
    if (!overrides.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    for (const auto& [key, value] : overrides.items()) {
        if (!cfg.contains(key)) {
            throw ConfigError("unknown config field '" + key + "' for command " + command);
        }
        if (!same_kind(cfg.at(key), value)) {
            throw ConfigError("config field '" + key + "' has the wrong type (expected " +
                              std::string(cfg.at(key).type_name()) + ")");
        }
        cfg[key] = value;
    }
    return cfg;
}

void apply_override(Json& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override must look like key=value, got '" + assignment + "'");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) {
        value = text;
    }
    config[key] = value;
}

RunOutput run(const std::string& command, const Json& cfg, unsigned threads) {
    if (command == "decompose") {
        return run_decompose(cfg);
    }
    if (command == "overhead") {
        return run_overhead(cfg);
    }
    if (command == "trotter") {
        return run_trotter(cfg, threads);
    }
    if (command == "vqe") {
        return run_vqe(cfg, threads);
    }
    if (command == "fidelity-decay") {
        return run_fidelity_decay(cfg, threads);
    }
    if (command == "rms") {
        return run_rms(cfg, threads);
    }
    throw ConfigError("unknown command '" + command + "'");
}

RunOutput run_decompose(const Json& cfg) {
    const NotchGrid grid = grid_from(cfg);
    const double angle = field<double>(cfg, "angle");
    if (!std::isfinite(angle)) {
        throw ConfigError("angle must be finite");
    }
    const GateQuasiProb qp = decompose_gate(grid, angle);
    const Json out = {
        {"version", version()},
        {"config", cfg},
        {"grid", grid_json(grid)},
        {"target_angle", qp.target_angle},
        {"position",
         {{"k", qp.position.k},
          {"theta", qp.position.theta},
          {"lambda", qp.position.lambda},
          {"delta_k", qp.position.delta_k}}},
        {"gammas", {qp.gammas(0), qp.gammas(1), qp.gammas(2)}},
        {"probs", {qp.probs(0), qp.probs(1), qp.probs(2)}},
        {"norm1", qp.norm1},
        {"gamma_sum", qp.gammas.sum()},
        {"residual", qp.residual},
        {"settings",
         {{"notches", qp.setting_notches}, {"angles", qp.setting_angles}, {"signs", qp.setting_signs}}},
    };
    return {{}, out.dump(2) + "\n"};
}

RunOutput run_overhead(const Json& cfg) {
    const int bmin = field<int>(cfg, "bits_min");
    const int bmax = field<int>(cfg, "bits_max");
    if (bmin < 2 || bmax < bmin || bmax > 30) {
        throw ConfigError("need 2 <= bits_min <= bits_max <= 30");
    }
    auto nus = field<std::vector<long long>>(cfg, "nu_values");
    if (std::any_of(nus.begin(), nus.end(), [](long long n) { return n < 0; })) {
        throw ConfigError("nu_values must be non-negative");
    }
    std::ostringstream csv;
    csv << csv_preamble(cfg) << "bits,nu,delta,overhead,exp_approx,max_gates\n";
    for (int b = bmin; b <= bmax; ++b) {
        const double delta = kTwoPi / std::ldexp(1.0, b);
        std::vector<std::uint64_t> row_nus(nus.begin(), nus.end());
        if (field<bool>(cfg, "include_max_gates")) {
            row_nus.push_back(max_gates_for_bits(b));
        }
        std::sort(row_nus.begin(), row_nus.end());
        row_nus.erase(std::unique(row_nus.begin(), row_nus.end()), row_nus.end());
        for (auto nu : row_nus) {
            csv << b << ',' << nu << ',' << number(delta) << ',' << number(worst_case_overhead(nu, delta)) << ','
                << number(std::exp(static_cast<double>(nu) * delta * delta / 4.0)) << ','
                << max_gates_for_bits(b) << '\n';
        }
    }
    return {{{field<std::string>(cfg, "output") + ".csv", csv.str()}}, ""};
}

RunOutput run_trotter(const Json& cfg, unsigned threads) {
    const SpinRingModel model = model_from(cfg);
    const Circuit circuit = trotter_from(cfg, model);
    const NotchGrid grid = grid_from(cfg);
    const PauliString obs = observable_from(cfg, model.n_qubits);
    const std::size_t variants = positive(cfg, "variants");
    const std::size_t spv = positive(cfg, "shots_per_variant");
    const std::size_t batch = positive(cfg, "batch_size");
    const std::size_t n_batches = positive(cfg, "n_batches");
    const auto seed = field<std::uint64_t>(cfg, "master_seed");
    const std::size_t total = variants * spv;
    if (batch > total) {
        throw ConfigError("batch_size exceeds the pooled shot count");
    }

    const CircuitDecomposition dec = decompose_circuit(grid, circuit);
    const auto pai = pai_shots(grid, circuit, obs, variants, spv, seed, threads);
    const auto nearest = nearest_notch_shots(grid, circuit, obs, total, seed);
    const auto continuous = continuous_shots(circuit, obs, total, seed);

    std::ostringstream csv;
    csv << csv_preamble(cfg) << "variant_id,sign,outcome_mean,factor\n";
    for (std::size_t v = 0; v < variants; ++v) {
        long sum = 0;
        for (std::size_t s = 0; s < spv; ++s) {
            sum += pai[v * spv + s].outcome;
        }
        const double factor = pai[v * spv].factor;
        csv << v << ',' << (factor < 0 ? -1 : 1) << ',' << number(static_cast<double>(sum) / static_cast<double>(spv))
            << ',' << number(factor) << '\n';
    }

    const double overhead = dec.overhead();
    const RefinedOverhead refined = refined_overhead(dec);
    const Observable o(obs);
    const Json summary = {
        {"version", version()},
        {"config", cfg},
        {"seed", seed},
        {"grid", grid_json(grid)},
        {"nu", dec.size()},
        {"norm1", dec.norm1_total},
        {"overhead_bound", overhead},
        {"worst_case_overhead", worst_case_overhead(dec.size(), dec.delta_max)},
        {"refined", {{"lambda_tilde", refined.lambda_tilde}, {"bound", refined.bound}}},
        {"exact",
         {{"continuous", continuous_expectation(circuit, o)},
          {"nearest", continuous_expectation(nearest_notch_circuit(grid, circuit), o)}}},
        {"estimators",
         {{"pai",
           {{"estimate", estimate_json(summarize(pai, overhead))},
            {"batches", batch_json(resample_batches(pai, batch, n_batches, stream_key({seed, 1})))}}},
          {"nearest",
           {{"estimate", estimate_json(summarize(nearest, 1.0))},
            {"batches", batch_json(resample_batches(nearest, batch, n_batches, stream_key({seed, 2})))}}},
          {"continuous",
           {{"estimate", estimate_json(summarize(continuous, 1.0))},
            {"batches", batch_json(resample_batches(continuous, batch, n_batches, stream_key({seed, 3})))}}}}},
    };
    const std::string out = field<std::string>(cfg, "output");
    return {{{out + "_shots.csv", csv.str()}, {out + "_summary.json", summary.dump(2) + "\n"}}, ""};
}

RunOutput run_vqe(const Json& cfg, unsigned threads) {
    const SpinRingModel model = model_from(cfg);
    const NotchGrid grid = grid_from(cfg);
    const HvaAnsatz ansatz{static_cast<int>(positive(cfg, "layers")),
                           initial_state_from_string(field<std::string>(cfg, "initial_state"))};
    const auto seed = field<std::uint64_t>(cfg, "master_seed");
    const double eta = field<double>(cfg, "learning_rate");
    const auto iterations = field<int>(cfg, "iterations");
    if (iterations < 0) {
        throw ConfigError("iterations must be >= 0");
    }
    std::vector<GradientMode> modes;
    for (const auto& m : field<std::vector<std::string>>(cfg, "modes")) {
        modes.push_back(gradient_mode_from_string(m));
    }
    if (modes.empty()) {
        throw ConfigError("modes must list at least one gradient mode");
    }

    const AnsatzParams init = initial_parameters(ansatz.parameter_count(model), seed);
    std::ostringstream csv;
    csv << csv_preamble(cfg) << "mode,iteration,energy,delta_e\n";
    Json finals = Json::object();
    Json floor = nullptr;
    double ground = 0.0;
    for (GradientMode mode : modes) {
        const EstimatorConfig est{mode, grid, positive(cfg, "shots"), positive(cfg, "variants"), seed, threads};
        const VqeResult res = vqe_run(model, ansatz, init, eta, iterations, est);
        ground = res.ground_energy;
        for (const auto& row : res.trace) {
            csv << to_string(mode) << ',' << row.iteration << ',' << number(row.energy) << ','
                << number(row.delta_e) << '\n';
        }
        finals[to_string(mode)] = {{"energy", res.trace.back().energy},
                                   {"delta_e", res.trace.back().delta_e},
                                   {"rounded_delta_e",
                                    rounded_energy(model, ansatz, res.final_params, grid) - res.ground_energy}};
        if (mode == GradientMode::kExact) {
            floor = rounded_energy(model, ansatz, res.final_params, grid) - res.ground_energy;
        }
    }
    const Json summary = {
        {"version", version()},
        {"config", cfg},
        {"seed", seed},
        {"grid", grid_json(grid)},
        {"nu", ansatz.parameter_count(model)},
        {"ground_energy", ground},
        {"initial_delta_e", energy(model, simulate(hva_circuit(model, ansatz, init))) - ground},
        {"notch_floor_delta_e", floor},
        {"final", finals},
    };
    const std::string out = field<std::string>(cfg, "output");
    return {{{out + "_trace.csv", csv.str()}, {out + "_summary.json", summary.dump(2) + "\n"}}, ""};
}

RunOutput run_fidelity_decay(const Json& cfg, unsigned threads) {
    const SpinRingModel model = model_from(cfg);
    const Circuit circuit = trotter_from(cfg, model);
    const NotchGrid grid = grid_from(cfg);
    const std::size_t points = positive(cfg, "points");
    const std::size_t nu = circuit.parametrised_count();
    std::vector<std::size_t> prefixes;
    for (std::size_t i = 0; i < points; ++i) {
        prefixes.push_back(points == 1 ? nu : nu * i / (points - 1));
    }
    const auto rows = fidelity_decay(grid, circuit, prefixes, positive(cfg, "variants"),
                                     field<std::uint64_t>(cfg, "master_seed"), threads);
    std::ostringstream csv;
    csv << csv_preamble(cfg) << "nu_prefix,fidelity,std_error\n";
    for (const auto& r : rows) {
        csv << r.nu_prefix << ',' << number(r.fidelity) << ',' << number(r.std_error) << '\n';
    }
    return {{{field<std::string>(cfg, "output") + ".csv", csv.str()}}, ""};
}

RunOutput run_rms(const Json& cfg, unsigned threads) {
    const SpinRingModel model = model_from(cfg);
    const Circuit circuit = trotter_from(cfg, model);
    const NotchGrid grid = grid_from(cfg);
    const PauliString obs = observable_from(cfg, model.n_qubits);
    const auto shot_grid = field<std::vector<std::size_t>>(cfg, "shot_grid");
    if (shot_grid.empty() || std::find(shot_grid.begin(), shot_grid.end(), 0u) != shot_grid.end()) {
        throw ConfigError("shot_grid must list positive shot counts");
    }
    const auto rows = rms_vs_shots(grid, circuit, obs, shot_grid, positive(cfg, "repeats"),
                                   field<std::uint64_t>(cfg, "master_seed"), threads);
    std::ostringstream csv;
    csv << csv_preamble(cfg) << "n_shots,rms,shot_noise_limit,worst_case_bound\n";
    for (const auto& r : rows) {
        csv << r.n_shots << ',' << number(r.rms) << ',' << number(r.shot_noise_limit) << ','
            << number(r.worst_case_bound) << '\n';
    }
    return {{{field<std::string>(cfg, "output") + ".csv", csv.str()}}, ""};
}

}  // namespace pai::experiments
