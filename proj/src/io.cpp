#include "qaf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qaf {

namespace {

std::string role_name(Variable::Role role) {
    switch (role) {
        case Variable::Role::PBit: return "p";
        case Variable::Role::QBit: return "q";
        case Variable::Role::Carry: return "carry";
        case Variable::Role::Aux: return "aux";
    }
    return "p";
}

}  // namespace

nlohmann::json instance_to_json(const Instance& inst, double norm_constant) {
    nlohmann::json j;
    j["N"] = inst.n_value;
    j["n"] = inst.qubits();
    j["W"] = inst.width;
    j["split"] = {{"lp", inst.split.lp}, {"lq", inst.split.lq}, {"ln", inst.split.ln}};
    nlohmann::json vars = nlohmann::json::array();
    for (const Variable& v : inst.registry.vars) {
        nlohmann::json jv;
        jv["role"] = role_name(v.role);
        jv["name"] = v.name;
        if (v.role == Variable::Role::Aux) {
            jv["pair"] = {v.pair_m, v.pair_n};
        } else {
            jv["index"] = v.index;
        }
        vars.push_back(jv);
    }
    j["variables"] = vars;
    j["h"] = inst.ising.fields;
    nlohmann::json couplings = nlohmann::json::array();
    for (const auto& c : inst.ising.couplings) couplings.push_back({c.i, c.j, c.value});
    j["J"] = couplings;
    j["offset"] = inst.ising.offset;
    // Degree >= 1 coefficients only; the constant term is excluded.
    j["normConstant"] = norm_constant;
    j["groundEnergy"] = inst.ground.min_energy;
    j["groundStates"] = inst.ground.states;
    return j;
}

Instance instance_from_json(const nlohmann::json& j) {
    Instance inst;
    inst.n_value = j.at("N").get<long long>();
    inst.width = j.at("W").get<int>();
    inst.split.lp = j.at("split").at("lp").get<int>();
    inst.split.lq = j.at("split").at("lq").get<int>();
    inst.split.ln = j.at("split").at("ln").get<int>();
    // Rebuild from first principles; the JSON carries the derived data
    // for interoperability, the encoding itself is deterministic.
    inst = encode_instance(inst.n_value, inst.split, inst.width);
    const auto fields = j.at("h").get<std::vector<double>>();
    if (fields != inst.ising.fields)
        throw std::runtime_error("instance_from_json: stored fields disagree with re-encoding");
    return inst;
}

std::string instance_to_coupler_text(const Instance& inst) {
    std::ostringstream out;
    for (int i = 0; i < inst.ising.n; ++i) {
        const double h = inst.ising.fields[static_cast<std::size_t>(i)];
        if (h != 0.0) out << i << ' ' << i << ' ' << format_double(h) << '\n';
    }
    for (const auto& c : inst.ising.couplings)
        out << c.i << ' ' << c.j << ' ' << format_double(c.value) << '\n';
    return out.str();
}

nlohmann::json size_class_to_json(const SizeClass& cls) {
    nlohmann::json j;
    j["n"] = cls.qubits;
    j["W"] = cls.width;
    j["normConstant"] = cls.norm_constant;
    j["normConvention"] = "max |QUBO coefficient| over degree >= 1 terms, offsets excluded";
    j["calibratedT"] = cls.calibrated_time;
    nlohmann::json members = nlohmann::json::array();
    for (const Instance& inst : cls.instances) members.push_back(inst.n_value);
    j["members"] = members;
    nlohmann::json instances = nlohmann::json::array();
    for (const Instance& inst : cls.instances) instances.push_back(instance_to_json(inst, cls.norm_constant));
    j["instances"] = instances;
    return j;
}

SizeClass size_class_from_json(const nlohmann::json& j) {
    SizeClass cls;
    cls.qubits = j.at("n").get<int>();
    cls.width = j.at("W").get<int>();
    cls.norm_constant = j.at("normConstant").get<double>();
    cls.calibrated_time = j.at("calibratedT").get<double>();
    for (const auto& ji : j.at("instances")) cls.instances.push_back(instance_from_json(ji));
    return cls;
}

nlohmann::json schedule_to_json(const Schedule& sched) {
    nlohmann::json j;
    j["form"] = sched.form_name();
    j["C"] = sched.coeffs.size();
    j["b"] = sched.coeffs;
    return j;
}

Schedule schedule_from_json(const nlohmann::json& j) {
    const std::string form = j.at("form").get<std::string>();
    if (form == "linear") return Schedule::linear();
    if (form == "quadratic") return Schedule::quadratic();
    if (form == "fourier") return Schedule::fourier(j.at("b").get<std::vector<double>>());
    throw std::runtime_error("unknown schedule form: " + form);
}

nlohmann::json split_report_to_json(const SplitReport& report) {
    nlohmann::json j;
    j["T"] = report.total_time;
    j["P_th"] = report.p_threshold;
    j["easy"] = report.easy;
    j["hard"] = report.hard;
    nlohmann::json success = nlohmann::json::array();
    for (const auto& [n_value, p] : report.success) success.push_back({n_value, p});
    j["success"] = success;
    return j;
}

SplitReport split_report_from_json(const nlohmann::json& j) {
    SplitReport report;
    report.total_time = j.at("T").get<double>();
    report.p_threshold = j.at("P_th").get<double>();
    report.easy = j.at("easy").get<std::vector<long long>>();
    report.hard = j.at("hard").get<std::vector<long long>>();
    for (const auto& entry : j.at("success"))
        report.success.emplace_back(entry[0].get<long long>(), entry[1].get<double>());
    return report;
}

nlohmann::json calibration_to_json(int qubits, const CalibrationResult& result,
                                   const std::vector<long long>& members) {
    nlohmann::json j;
    j["n"] = qubits;
    j["T"] = result.total_time;
    j["P_th"] = result.p_threshold;
    j["reached"] = result.reached;
    j["members"] = members;
    nlohmann::json grid = nlohmann::json::array();
    for (const auto& point : result.grid)
        grid.push_back({{"T", point.total_time},
                        {"mean_success", point.mean_success},
                        {"per_instance", point.per_instance}});
    j["grid"] = grid;
    return j;
}

nlohmann::json hardness_summary_to_json(const std::vector<HardnessReport>& reports,
                                        const std::vector<long long>& ranking) {
    nlohmann::json j;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& r : reports)
        entries.push_back({{"N", r.n_value},
                           {"mean", r.mean},
                           {"median", r.median},
                           {"max", r.max},
                           {"std_error", r.std_error},
                           {"censored", r.censored},
                           {"runs", r.j0_star.size()}});
    j["instances"] = entries;
    j["ranking"] = ranking;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

nlohmann::json read_json_file(const std::string& path) {
    return nlohmann::json::parse(read_text_file(path));
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw std::invalid_argument("CsvWriter: column count mismatch");
    rows_.push_back(std::move(row));
}

std::string CsvWriter::str() const {
    std::ostringstream out;
    auto join = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out << ',';
            out << fields[i];
        }
        out << '\n';
    };
    join(header_);
    for (const auto& row : rows_) join(row);
    return out.str();
}

void CsvWriter::save(const std::string& path) const { write_text_file(path, str()); }

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace qaf
