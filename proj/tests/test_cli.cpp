#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch_root() {
    static const fs::path root =
        fs::temp_directory_path() / ("mpsprep_cli_test_" + std::to_string(getpid()));
    fs::create_directories(root);
    return root;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = scratch_root() / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path base = scratch_root() / ("stream_" + std::to_string(counter++));
    const std::string cmd = std::string(CLI_BINARY_PATH) + " " + args + " > " +
                            base.string() + ".out 2> " + base.string() + ".err";
    const int rc = std::system(cmd.c_str());
    RunResult res;
    res.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    res.out = slurp(base.string() + ".out");
    res.err = slurp(base.string() + ".err");
    return res;
}

int count_lines_starting(const std::string& text, const std::string& prefix) {
    int n = 0;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (line.rfind(prefix, 0) == 0) ++n;
    return n;
}

}  // namespace

TEST_CASE("encode writes the state and a faithful report") {
    const fs::path d = fresh_dir("encode");
    const RunResult r = run_cli("encode --order 16 --qubits 20 --chi-max 8 --output-dir " +
                                d.string());
    REQUIRE(r.code == 0);
    const json state = json::parse(slurp(d / "mps.json"));
    CHECK(state["n_sites"] == 20);
    CHECK(state["tensors"].size() == 20);
    const json report = json::parse(slurp(d / "report.json"));
    CHECK(report["order"] == 16);
    CHECK(report["qubits"] == 20);
    CHECK(report["chi_max"] == 8);
    const double fid = report["fidelity_lower_bound"].get<double>();
    CHECK(fid > 0.9);
    CHECK(fid <= 1.0);
    CHECK(report["raw_max_bond"].get<int>() == 256);
    CHECK(report["max_bond"].get<int>() <= 8);
}

TEST_CASE("invalid order fails with a machine-readable validation error") {
    const fs::path d = fresh_dir("encode_bad");
    const RunResult r = run_cli("encode --order 3 --qubits 8 --output-dir " + d.string());
    CHECK(r.code == 2);
    const json err = json::parse(r.err);
    CHECK(err["error"]["type"] == "validation");
    CHECK(!err["error"]["message"].get<std::string>().empty());
    CHECK_FALSE(fs::exists(d / "mps.json"));
}

TEST_CASE("missing required flags are a usage error") {
    const RunResult r = run_cli("encode --qubits 8");
    CHECK(r.code == 2);
    const json err = json::parse(r.err);
    CHECK(err["error"]["type"] == "validation");
}

TEST_CASE("circuit command emits program files with the exact gate count") {
    const fs::path d = fresh_dir("circuit");
    const RunResult r = run_cli("circuit --order 16 --qubits 20 --depth 1 --output-dir " +
                                d.string());
    REQUIRE(r.code == 0);
    const std::string qasm = slurp(d / "circuit.qasm");
    CHECK(count_lines_starting(qasm, "cx ") == 38);
    CHECK(qasm.find("OPENQASM 2.0;") != std::string::npos);

    const json report = json::parse(slurp(d / "report.json"));
    CHECK(report["cx_count"] == 38);
    CHECK(report["infidelities"].size() == 1);
    CHECK(report["final_infidelity"].get<double>() < 0.1);

    const json circuit = json::parse(slurp(d / "circuit.json"));
    CHECK(circuit["n_qubits"] == 20);
    CHECK(circuit["metadata"]["order"] == 16);
    CHECK(circuit["metadata"]["interval"][1] == 16.0);
}

TEST_CASE("sampling is reproducible per seed") {
    const fs::path d = fresh_dir("sample_src");
    REQUIRE(run_cli("circuit --order 4 --qubits 6 --depth 1 --output-dir " + d.string())
                .code == 0);
    const fs::path s1 = fresh_dir("sample_a"), s2 = fresh_dir("sample_b"),
                   s3 = fresh_dir("sample_c");
    const std::string base = "sample --circuit " + (d / "circuit.json").string() +
                             " --shots 200 --seed 7 --output-dir ";
    REQUIRE(run_cli(base + s1.string()).code == 0);
    REQUIRE(run_cli(base + s2.string()).code == 0);
    const std::string a = slurp(s1 / "samples.csv");
    CHECK(a == slurp(s2 / "samples.csv"));
    CHECK(count_lines_starting(a, "") == 201);  // header + one row per shot
    REQUIRE(run_cli("sample --circuit " + (d / "circuit.json").string() +
                    " --shots 200 --seed 8 --output-dir " + s3.string())
                .code == 0);
    CHECK(a != slurp(s3 / "samples.csv"));
}

TEST_CASE("simulate writes a normalized distribution") {
    const fs::path d = fresh_dir("simulate_src");
    REQUIRE(run_cli("circuit --order 4 --qubits 6 --depth 2 --output-dir " + d.string())
                .code == 0);
    const fs::path out = fresh_dir("simulate_out");
    const RunResult r = run_cli("simulate --circuit " + (d / "circuit.json").string() +
                                " --backend statevector --output-dir " + out.string());
    REQUIRE(r.code == 0);
    std::istringstream is(slurp(out / "distribution.csv"));
    std::string line;
    std::getline(is, line);
    CHECK(line == "bitstring,index,x,probability");
    int rows = 0;
    double total = 0.0;
    while (std::getline(is, line)) {
        ++rows;
        const auto last = line.rfind(',');
        total += std::stod(line.substr(last + 1));
    }
    CHECK(rows == 64);
    CHECK(std::abs(total - 1.0) < 1e-9);

    const fs::path out2 = fresh_dir("simulate_mps_out");
    REQUIRE(run_cli("simulate --circuit " + (d / "circuit.json").string() +
                    " --backend mps --output-dir " + out2.string())
                .code == 0);
    CHECK(fs::exists(out2 / "state.json"));
    CHECK(fs::exists(out2 / "distribution.csv"));
}

TEST_CASE("config file supplies defaults and flags win") {
    const fs::path d = fresh_dir("config");
    {
        std::ofstream cfg(d / "cfg.json");
        cfg << R"({"order": 4, "qubits": 6, "chi_max": 4})";
    }
    const RunResult r = run_cli("encode --config " + (d / "cfg.json").string() +
                                " --output-dir " + d.string());
    REQUIRE(r.code == 0);
    CHECK(json::parse(slurp(d / "report.json"))["qubits"] == 6);

    const fs::path d2 = fresh_dir("config_override");
    const RunResult r2 = run_cli("encode --config " + (d / "cfg.json").string() +
                                 " --qubits 5 --output-dir " + d2.string());
    REQUIRE(r2.code == 0);
    CHECK(json::parse(slurp(d2 / "report.json"))["qubits"] == 5);
}

TEST_CASE("output directory falls back to the environment variable") {
    const fs::path d = fresh_dir("env_out");
    setenv("MPSPREP_OUTPUT_DIR", d.string().c_str(), 1);
    const RunResult r = run_cli("encode --order 4 --qubits 5");
    unsetenv("MPSPREP_OUTPUT_DIR");
    REQUIRE(r.code == 0);
    CHECK(fs::exists(d / "mps.json"));
}

TEST_CASE("figure 2a reports its fitted slopes on stdout") {
    const fs::path d = fresh_dir("fig2a");
    const RunResult r = run_cli("figure --id 2a --output-dir " + d.string());
    REQUIRE(r.code == 0);
    const json summary = json::parse(r.out);
    CHECK(summary["figure"] == "2a");
    const double slope = summary["sup_slope"].get<double>();
    CHECK(slope < -1.0);
    CHECK(slope > -2.2);
    const std::string csv = slurp(d / "fig2a.csv");
    CHECK(count_lines_starting(csv, "") == 8);  // header + 7 orders
    CHECK(csv.rfind("n,", 0) == 0);

    const RunResult bad = run_cli("figure --id nope --output-dir " + d.string());
    CHECK(bad.code == 2);
}
