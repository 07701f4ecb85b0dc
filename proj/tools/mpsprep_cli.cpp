#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "mpsprep/circuit.hpp"
#include "mpsprep/compile.hpp"
#include "mpsprep/distributions.hpp"
#include "mpsprep/encode.hpp"
#include "mpsprep/figures.hpp"
#include "mpsprep/serialize.hpp"
#include "mpsprep/stats.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace mpsprep;

// Flag > config-file key > environment/default.
struct Params {
    json cfg = json::object();

    void load(const std::string& path) {
        if (path.empty()) return;
        cfg = read_json_file(path);
        if (!cfg.is_object()) throw validation_error("config file must hold a JSON object");
    }

    int get_int(const CLI::Option* opt, int flag_value, const char* key,
                std::optional<int> fallback = std::nullopt) const {
        if (opt->count()) return flag_value;
        if (cfg.contains(key) && !cfg[key].is_null()) {
            if (!cfg[key].is_number_integer())
                throw validation_error(std::string(key) + " in config must be an integer");
            return cfg[key].get<int>();
        }
        if (fallback) return *fallback;
        throw validation_error(std::string("--") + key + " is required");
    }

    std::uint64_t get_u64(const CLI::Option* opt, std::uint64_t flag_value, const char* key,
                          std::uint64_t fallback) const {
        if (opt->count()) return flag_value;
        if (cfg.contains(key) && !cfg[key].is_null()) {
            if (!cfg[key].is_number_unsigned() && !cfg[key].is_number_integer())
                throw validation_error(std::string(key) + " in config must be an integer");
            return cfg[key].get<std::uint64_t>();
        }
        return fallback;
    }

    std::string get_str(const CLI::Option* opt, const std::string& flag_value, const char* key,
                        const std::string& fallback) const {
        if (opt->count()) return flag_value;
        if (cfg.contains(key) && !cfg[key].is_null()) {
            if (!cfg[key].is_string())
                throw validation_error(std::string(key) + " in config must be a string");
            return cfg[key].get<std::string>();
        }
        return fallback;
    }

    std::optional<int> get_opt_int(const CLI::Option* opt, int flag_value,
                                   const char* key) const {
        if (opt->count()) return flag_value;
        if (cfg.contains(key) && !cfg[key].is_null()) {
            if (!cfg[key].is_number_integer())
                throw validation_error(std::string(key) + " in config must be an integer");
            return cfg[key].get<int>();
        }
        return std::nullopt;
    }
};

std::string resolve_output_dir(const Params& p, const CLI::Option* opt,
                               const std::string& flag_value) {
    if (opt->count()) return flag_value;
    if (p.cfg.contains("output_dir") && p.cfg["output_dir"].is_string())
        return p.cfg["output_dir"].get<std::string>();
    if (const char* env = std::getenv("MPSPREP_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

AmplitudeMode parse_mode(const std::string& s) {
    if (s == "pdf") return AmplitudeMode::pdf;
    if (s == "sqrt_pdf") return AmplitudeMode::sqrt_pdf;
    throw validation_error("amplitude mode must be 'pdf' or 'sqrt_pdf'");
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw numeric_error("cannot create output directory '" + dir + "'");
}

json encode_report_json(const TruncationReport& rep) {
    return {{"raw_max_bond", rep.raw_max_bond},
            {"max_bond", rep.max_bond},
            {"norm_scale", rep.norm_scale},
            {"discarded_weights", rep.discarded_weights},
            {"fidelity_lower_bound", rep.fidelity_lower_bound()}};
}

struct CircuitBundle {
    Circuit circuit;
    json metadata;
    Grid grid;
};

CircuitBundle load_circuit(const std::string& path) {
    json meta;
    Circuit circuit = circuit_from_json(read_json_file(path), &meta);
    const int n_qubits = meta.value("qubits", circuit.n_qubits());
    double a = 0.0, b = 1.0;
    if (meta.contains("interval") && meta["interval"].is_array() &&
        meta["interval"].size() == 2) {
        a = meta["interval"][0].get<double>();
        b = meta["interval"][1].get<double>();
    } else if (meta.contains("order")) {
        b = meta["order"].get<double>();
    } else {
        throw validation_error("circuit metadata lacks an interval for decoding x values");
    }
    return {std::move(circuit), std::move(meta), Grid(n_qubits, a, b)};
}

int cmd_encode(const Params& p, const CLI::Option* o_order, int order, const CLI::Option* o_qubits,
               int qubits, const CLI::Option* o_chi, int chi, const CLI::Option* o_mode,
               const std::string& mode_s, const std::string& outdir) {
    const int n = p.get_int(o_order, order, "order");
    const int nq = p.get_int(o_qubits, qubits, "qubits");
    const std::optional<int> chi_max = p.get_opt_int(o_chi, chi, "chi_max");
    const AmplitudeMode mode = parse_mode(p.get_str(o_mode, mode_s, "amplitude_mode", "pdf"));

    const IrwinHallEncoding enc = encode_irwin_hall(n, nq, chi_max, mode);
    ensure_dir(outdir);
    json report = encode_report_json(enc.report);
    report["order"] = n;
    report["qubits"] = nq;
    report["interval"] = {enc.grid.a, enc.grid.b};
    report["amplitude_mode"] = mode == AmplitudeMode::pdf ? "pdf" : "sqrt_pdf";
    report["chi_max"] = chi_max ? json(*chi_max) : json(nullptr);
    write_json_file(join(outdir, "mps.json"), mps_to_json(enc.state));
    write_json_file(join(outdir, "report.json"), report);
    std::cout << json{{"written", {join(outdir, "mps.json"), join(outdir, "report.json")}}}
              << "\n";
    return 0;
}

int cmd_circuit(const Params& p, const CLI::Option* o_order, int order,
                const CLI::Option* o_qubits, int qubits, const CLI::Option* o_depth, int depth,
                const CLI::Option* o_chi, int chi, const std::string& outdir) {
    const int n = p.get_int(o_order, order, "order");
    const int nq = p.get_int(o_qubits, qubits, "qubits");
    const int d = p.get_int(o_depth, depth, "depth");
    const std::optional<int> chi_max = p.get_opt_int(o_chi, chi, "chi_max");

    const IrwinHallEncoding enc = encode_irwin_hall(n, nq, chi_max);
    auto [circuit, infidelities] = extract_circuit(enc.state, d);
    const CompiledCircuit compiled = compile_circuit(circuit);

    json metadata = {{"order", n},
                     {"qubits", nq},
                     {"depth", d},
                     {"interval", {enc.grid.a, enc.grid.b}},
                     {"amplitude_mode", "pdf"},
                     {"chi_max", chi_max ? json(*chi_max) : json(nullptr)}};
    json report = {{"infidelities", infidelities},
                   {"final_infidelity", infidelities.back()},
                   {"cx_count", compiled.cx_count()},
                   {"encode_report", encode_report_json(enc.report)}};
    ensure_dir(outdir);
    write_json_file(join(outdir, "circuit.json"), circuit_to_json(circuit, metadata));
    write_text_file(join(outdir, "circuit.qasm"), to_qasm(compiled));
    write_json_file(join(outdir, "report.json"), report);
    std::cout << json{{"written",
                       {join(outdir, "circuit.json"), join(outdir, "circuit.qasm"),
                        join(outdir, "report.json")}}}
              << "\n";
    return 0;
}

int cmd_simulate(const Params& p, const CLI::Option* o_circ, const std::string& circ,
                 const CLI::Option* o_backend, const std::string& backend_s,
                 const std::string& outdir) {
    const std::string path = p.get_str(o_circ, circ, "circuit", "circuit.json");
    const std::string backend = p.get_str(o_backend, backend_s, "backend", "mps");
    if (backend != "mps" && backend != "statevector")
        throw validation_error("backend must be 'mps' or 'statevector'");
    CircuitBundle bundle = load_circuit(path);
    const int nq = bundle.grid.n_qubits;

    std::optional<MPS> state;
    Eigen::VectorXd amps;
    if (backend == "statevector") {
        amps = simulate_statevector(bundle.circuit);
    } else {
        state = simulate_mps(bundle.circuit);
        if (nq <= 24) amps = to_statevector(*state);
    }
    ensure_dir(outdir);
    json written = json::array();
    if (state) {
        write_json_file(join(outdir, "state.json"), mps_to_json(*state));
        written.push_back(join(outdir, "state.json"));
    }
    if (amps.size()) {
        std::ostringstream os;
        os << "bitstring,index,x,probability\n";
        for (Eigen::Index k = 0; k < amps.size(); ++k) {
            os << to_bitstring(std::uint64_t(k), nq) << "," << k << ","
               << format_g17(bundle.grid.x(std::uint64_t(k))) << ","
               << format_g17(amps(k) * amps(k)) << "\n";
        }
        write_text_file(join(outdir, "distribution.csv"), os.str());
        written.push_back(join(outdir, "distribution.csv"));
    }
    std::cout << json{{"written", written}} << "\n";
    return 0;
}

int cmd_sample(const Params& p, const CLI::Option* o_circ, const std::string& circ,
               const CLI::Option* o_shots, int shots, const CLI::Option* o_seed,
               std::uint64_t seed, const std::string& outdir) {
    const std::string path = p.get_str(o_circ, circ, "circuit", "circuit.json");
    const int n_shots = p.get_int(o_shots, shots, "shots", 10000);
    const std::uint64_t rng_seed = p.get_u64(o_seed, seed, "seed", 1);

    CircuitBundle bundle = load_circuit(path);
    const MPS state = simulate_mps(bundle.circuit);
    const auto draws = sample(state, n_shots, rng_seed);
    ensure_dir(outdir);
    std::ostringstream os;
    os << "bitstring,index,x\n";
    for (std::uint64_t k : draws)
        os << to_bitstring(k, bundle.grid.n_qubits) << "," << k << ","
           << format_g17(bundle.grid.x(k)) << "\n";
    write_text_file(join(outdir, "samples.csv"), os.str());
    std::cout << json{{"written", {join(outdir, "samples.csv")}}} << "\n";
    return 0;
}

int cmd_figure(const Params& p, const CLI::Option* o_id, const std::string& id_s,
               const CLI::Option* o_order, int order, const CLI::Option* o_qubits, int qubits,
               const CLI::Option* o_maxq, int maxq, const CLI::Option* o_maxd, int maxd,
               const std::string& outdir) {
    const std::string id = p.get_str(o_id, id_s, "id", "");
    json summary = {{"figure", id}};
    if (id == "2a" || id == "2b") {
        const Figure2 fig = (id == "2a") ? figure_2a() : figure_2b();
        ensure_dir(outdir);
        const std::string file = join(outdir, "fig" + id + ".csv");
        write_csv(file, fig.series.columns, fig.series.rows);
        summary["file"] = file;
        summary["sup_slope"] = fig.sup_fit.slope;
        summary["avg_slope"] = fig.avg_fit.slope;
        summary["sup_r2"] = fig.sup_fit.r2;
        summary["avg_r2"] = fig.avg_fit.r2;
    } else if (id == "3") {
        const int n = p.get_int(o_order, order, "order", 16);
        const int mq = p.get_int(o_maxq, maxq, "max_qubits", 23);
        const FigureSeries series = figure_3(n, mq);
        ensure_dir(outdir);
        const std::string file = join(outdir, "fig3.csv");
        write_csv(file, series.columns, series.rows);
        summary["file"] = file;
    } else if (id == "4a") {
        const int nq = p.get_int(o_qubits, qubits, "qubits", 14);
        const int md = p.get_int(o_maxd, maxd, "max_depth", 16);
        const FigureSeries series = figure_4a(nq, md);
        ensure_dir(outdir);
        const std::string file = join(outdir, "fig4a.csv");
        write_csv(file, series.columns, series.rows);
        summary["file"] = file;
    } else if (id == "4b") {
        const int nq = p.get_int(o_qubits, qubits, "qubits", 14);
        const int md = p.get_int(o_maxd, maxd, "max_depth", 8);
        const Figure4b fig = figure_4b(nq, md);
        ensure_dir(outdir);
        const std::string file = join(outdir, "fig4b.csv");
        const std::string floors = join(outdir, "fig4b_floors.csv");
        write_csv(file, fig.curves.columns, fig.curves.rows);
        write_csv(floors, fig.floors.columns, fig.floors.rows);
        summary["file"] = file;
        summary["floors_file"] = floors;
    } else {
        throw validation_error("unknown figure id '" + id + "' (use 2a, 2b, 3, 4a, 4b)");
    }
    std::cout << summary << "\n";
    return 0;
}

int report_error(const char* type, const std::string& message, int code) {
    std::cerr << json{{"error", {{"type", type}, {"message", message}}}} << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Matrix-product-state preparation of sum-of-uniforms distributions"};
    app.require_subcommand(1);

    std::string config_path, outdir_flag, mode_s = "pdf", backend_s = "mps", circ_path, fig_id;
    int order = 0, qubits = 0, depth = 0, chi = 0, shots = 10000, maxq = 23, maxd = 0;
    std::uint64_t seed = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file; flags override its keys");
        return sub->add_option("--output-dir", outdir_flag,
                               "output directory (or MPSPREP_OUTPUT_DIR, default '.')");
    };

    CLI::App* enc = app.add_subcommand("encode", "build and store the target state");
    auto* enc_out = add_common(enc);
    auto* enc_order = enc->add_option("--order", order, "distribution order (power of two)");
    auto* enc_qubits = enc->add_option("--qubits", qubits, "grid qubit count");
    auto* enc_chi = enc->add_option("--chi-max", chi, "bond-dimension cap");
    auto* enc_mode = enc->add_option("--amplitude-mode", mode_s, "pdf or sqrt_pdf");

    CLI::App* cir = app.add_subcommand("circuit", "extract and compile a staircase circuit");
    auto* cir_out = add_common(cir);
    auto* cir_order = cir->add_option("--order", order, "distribution order (power of two)");
    auto* cir_qubits = cir->add_option("--qubits", qubits, "grid qubit count");
    auto* cir_depth = cir->add_option("--depth", depth, "number of layers");
    auto* cir_chi = cir->add_option("--chi-max", chi, "bond cap for the encode step");

    CLI::App* sim = app.add_subcommand("simulate", "noiseless simulation of a stored circuit");
    auto* sim_out = add_common(sim);
    auto* sim_circ = sim->add_option("--circuit", circ_path, "path to circuit.json");
    auto* sim_backend = sim->add_option("--backend", backend_s, "mps or statevector");

    CLI::App* smp = app.add_subcommand("sample", "draw seeded shots from a stored circuit");
    auto* smp_out = add_common(smp);
    auto* smp_circ = smp->add_option("--circuit", circ_path, "path to circuit.json");
    auto* smp_shots = smp->add_option("--shots", shots, "number of samples");
    auto* smp_seed = smp->add_option("--seed", seed, "RNG seed");

    CLI::App* fig = app.add_subcommand("figure", "emit plot-ready CSV series");
    auto* fig_out = add_common(fig);
    auto* fig_idopt = fig->add_option("--id", fig_id, "one of 2a, 2b, 3, 4a, 4b");
    auto* fig_order = fig->add_option("--order", order, "distribution order (figure 3)");
    auto* fig_qubits = fig->add_option("--qubits", qubits, "grid qubits (figures 4a/4b)");
    auto* fig_maxq = fig->add_option("--max-qubits", maxq, "largest grid (figure 3)");
    auto* fig_maxd = fig->add_option("--max-depth", maxd, "largest depth (figures 4a/4b)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return report_error("validation", e.what(), 2);
    }

    try {
        Params p;
        p.load(config_path);
        if (enc->parsed())
            return cmd_encode(p, enc_order, order, enc_qubits, qubits, enc_chi, chi, enc_mode,
                              mode_s, resolve_output_dir(p, enc_out, outdir_flag));
        if (cir->parsed())
            return cmd_circuit(p, cir_order, order, cir_qubits, qubits, cir_depth, depth,
                               cir_chi, chi, resolve_output_dir(p, cir_out, outdir_flag));
        if (sim->parsed())
            return cmd_simulate(p, sim_circ, circ_path, sim_backend, backend_s,
                                resolve_output_dir(p, sim_out, outdir_flag));
        if (smp->parsed())
            return cmd_sample(p, smp_circ, circ_path, smp_shots, shots, smp_seed, seed,
                              resolve_output_dir(p, smp_out, outdir_flag));
        if (fig->parsed())
            return cmd_figure(p, fig_idopt, fig_id, fig_order, order, fig_qubits, qubits,
                              fig_maxq, maxq, fig_maxd, maxd,
                              resolve_output_dir(p, fig_out, outdir_flag));
        return report_error("validation", "no subcommand given", 2);
    } catch (const validation_error& e) {
        return report_error("validation", e.what(), 2);
    } catch (const numeric_error& e) {
        return report_error("numeric", e.what(), 3);
    } catch (const std::exception& e) {
        return report_error("runtime", e.what(), 3);
    }
}
