#include "mpsprep/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mpsprep {
namespace {

using nlohmann::json;

const char* form_name(MPS::Form f) {
    switch (f) {
        case MPS::Form::left: return "left";
        case MPS::Form::right: return "right";
        case MPS::Form::mixed: return "mixed";
        default: return "none";
    }
}

MPS::Form form_from_name(const std::string& s) {
    if (s == "left") return MPS::Form::left;
    if (s == "right") return MPS::Form::right;
    if (s == "mixed") return MPS::Form::mixed;
    if (s == "none") return MPS::Form::none;
    throw validation_error("unknown canonical_form '" + s + "'");
}

void require(bool ok, const char* what) {
    if (!ok) throw validation_error(std::string("malformed document: ") + what);
}

}  // namespace

json mps_to_json(const MPS& state) {
    state.validate();
    json tensors = json::array();
    for (const auto& site : state.sites) {
        const auto l = site[0].rows(), r = site[0].cols();
        json values = json::array();
        for (Eigen::Index a = 0; a < l; ++a)
            for (int sig = 0; sig < 2; ++sig)
                for (Eigen::Index b = 0; b < r; ++b) values.push_back(site[sig](a, b));
        tensors.push_back({{"shape", {l, 2, r}}, {"values", std::move(values)}});
    }
    return {{"version", 1},
            {"n_sites", state.size()},
            {"phys_dim", 2},
            {"canonical_form", form_name(state.form)},
            {"tensors", std::move(tensors)}};
}

MPS mps_from_json(const json& doc) {
    require(doc.is_object() && doc.contains("tensors") && doc["tensors"].is_array(),
            "missing tensors array");
    require(doc.value("version", 0) == 1, "unsupported version");
    require(doc.value("phys_dim", 0) == 2, "phys_dim must be 2");
    MPS state;
    for (const auto& t : doc["tensors"]) {
        require(t.contains("shape") && t["shape"].size() == 3, "tensor shape must be rank 3");
        const long l = t["shape"][0], phys = t["shape"][1], r = t["shape"][2];
        require(phys == 2, "physical dimension must be 2");
        require(l >= 1 && r >= 1, "bond dimensions must be positive");
        const auto& v = t["values"];
        require(v.is_array() && long(v.size()) == l * 2 * r, "tensor value count mismatch");
        std::array<Eigen::MatrixXd, 2> site{Eigen::MatrixXd(l, r), Eigen::MatrixXd(l, r)};
        std::size_t idx = 0;
        for (long a = 0; a < l; ++a)
            for (int sig = 0; sig < 2; ++sig)
                for (long b = 0; b < r; ++b) site[sig](a, b) = v[idx++].get<double>();
        state.sites.push_back(std::move(site));
    }
    require(long(state.sites.size()) == doc.value("n_sites", -1), "n_sites mismatch");
    state.form = form_from_name(doc.value("canonical_form", "none"));
    state.validate();
    return state;
}

json circuit_to_json(const Circuit& circuit, const json& metadata) {
    circuit.validate();
    json layers = json::array();
    for (const auto& layer : circuit.layers) {
        json gates = json::array();
        for (const auto& g : layer.gates) {
            json m = json::array();
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) m.push_back(g(r, c));
            gates.push_back(std::move(m));
        }
        json head = json::array();
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) head.push_back(layer.head(r, c));
        layers.push_back({{"gates", std::move(gates)}, {"head", std::move(head)}});
    }
    return {{"version", 1},
            {"n_qubits", circuit.n_qubits()},
            {"layers", std::move(layers)},
            {"metadata", metadata}};
}

Circuit circuit_from_json(const json& doc, json* metadata) {
    require(doc.is_object() && doc.contains("layers") && doc["layers"].is_array(),
            "missing layers array");
    require(doc.value("version", 0) == 1, "unsupported version");
    const int n = doc.value("n_qubits", 0);
    require(n >= 2, "n_qubits must be >= 2");
    Circuit circuit;
    for (const auto& jl : doc["layers"]) {
        CircuitLayer layer;
        require(jl.contains("gates") && long(jl["gates"].size()) == n - 1,
                "layer gate count must be n_qubits - 1");
        for (const auto& jm : jl["gates"]) {
            require(jm.is_array() && jm.size() == 16, "gate must have 16 entries");
            Eigen::Matrix4d g;
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) g(r, c) = jm[4 * r + c].get<double>();
            layer.gates.push_back(g);
        }
        require(jl.contains("head") && jl["head"].size() == 4, "head must have 4 entries");
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) layer.head(r, c) = jl["head"][2 * r + c].get<double>();
        circuit.layers.push_back(std::move(layer));
    }
    require(!circuit.layers.empty(), "circuit needs at least one layer");
    circuit.validate();
    if (metadata) *metadata = doc.value("metadata", json::object());
    return circuit;
}

json compiled_to_json(const CompiledCircuit& compiled) {
    json ops = json::array();
    for (const auto& op : compiled.ops) {
        switch (op.kind) {
            case NativeOp::Kind::ry:
                ops.push_back({{"op", "ry"}, {"angle", op.angle}, {"qubit", op.qubit}});
                break;
            case NativeOp::Kind::rz:
                ops.push_back({{"op", "rz"}, {"angle", op.angle}, {"qubit", op.qubit}});
                break;
            case NativeOp::Kind::cx:
                ops.push_back({{"op", "cx"}, {"control", op.control}, {"target", op.target}});
                break;
        }
    }
    return {{"version", 1},
            {"n_qubits", compiled.n_qubits},
            {"ops", std::move(ops)},
            {"final_permutation", compiled.final_permutation}};
}

CompiledCircuit compiled_from_json(const json& doc) {
    require(doc.is_object() && doc.contains("ops") && doc["ops"].is_array(), "missing ops");
    require(doc.value("version", 0) == 1, "unsupported version");
    CompiledCircuit compiled;
    compiled.n_qubits = doc.value("n_qubits", 0);
    require(compiled.n_qubits >= 0, "bad n_qubits");
    for (const auto& jo : doc["ops"]) {
        const std::string kind = jo.value("op", "");
        if (kind == "ry" || kind == "rz") {
            compiled.ops.push_back(NativeOp::rotation(
                kind == "ry" ? NativeOp::Kind::ry : NativeOp::Kind::rz,
                jo.at("angle").get<double>(), jo.at("qubit").get<int>()));
        } else if (kind == "cx") {
            compiled.ops.push_back(
                NativeOp::cnot(jo.at("control").get<int>(), jo.at("target").get<int>()));
        } else {
            throw validation_error("unknown op kind '" + kind + "'");
        }
    }
    compiled.final_permutation =
        doc.value("final_permutation", std::vector<int>{});
    require(int(compiled.final_permutation.size()) == compiled.n_qubits,
            "permutation size must equal n_qubits");
    return compiled;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i)
        os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw validation_error("csv row width does not match the header");
        for (std::size_t i = 0; i < row.size(); ++i)
            os << format_g17(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
    write_text_file(path, os.str());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw numeric_error("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw numeric_error("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw validation_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

nlohmann::json read_json_file(const std::string& path) {
    const std::string text = read_text_file(path);
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw validation_error("'" + path + "' is not valid JSON");
    return doc;
}

void write_json_file(const std::string& path, const nlohmann::json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace mpsprep
