#include "resolute/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace resolute {

namespace {

constexpr const char* kSchemaVersion = "resolute-csv v1";

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json trace_json_body(const Trace& trace) {
    nlohmann::json j;
    j["schema"] = kSchemaVersion;
    j["label"] = trace.label;
    j["seed"] = trace.seed;
    j["config"] = trace.config_echo;
    j["axis_name"] = trace.axis_name;
    j["axis"] = trace.axis;
    j["columns"] = nlohmann::json::array();
    for (const TraceColumn& c : trace.columns) {
        j["columns"].push_back({{"name", c.name}, {"values", c.values}, {"stderrs", c.stderrs}});
    }
    return j;
}

}  // namespace

OutputFormat format_from_path(const std::string& path) {
    const std::size_t dot = path.find_last_of('.');
    if (dot != std::string::npos && path.substr(dot) == ".json") return OutputFormat::Json;
    return OutputFormat::Csv;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("rename failed: " + path + ": " + std::strerror(errno));
    }
}

std::string trace_to_csv(const Trace& trace) {
    std::string s;
    s += "# schema: ";
    s += kSchemaVersion;
    s += '\n';
    s += "# label: " + trace.label + '\n';
    s += "# seed: " + std::to_string(trace.seed) + '\n';
    {
        std::istringstream echo(trace.config_echo);
        std::string line;
        while (std::getline(echo, line)) s += "# config: " + line + '\n';
    }
    s += trace.axis_name;
    for (const TraceColumn& c : trace.columns) {
        s += "," + c.name + "," + c.name + "_se";
    }
    s += '\n';
    for (std::size_t i = 0; i < trace.axis.size(); ++i) {
        s += fmt(trace.axis[i]);
        for (const TraceColumn& c : trace.columns) {
            s += ",";
            s += fmt(c.values[i]);
            s += ",";
            s += fmt(c.stderrs[i]);
        }
        s += '\n';
    }
    return s;
}

std::string trace_to_json(const Trace& trace) { return trace_json_body(trace).dump(2) + "\n"; }

void write_trace(const Trace& trace, const std::string& path, OutputFormat format) {
    write_text_atomic(path,
                      format == OutputFormat::Json ? trace_to_json(trace) : trace_to_csv(trace));
}

void write_trace(const Trace& trace, const std::string& path) {
    write_trace(trace, path, format_from_path(path));
}

Trace read_trace_csv(const std::string& text) {
    Trace trace;
    std::istringstream in(text);
    std::string line;
    bool header_done = false;
    std::vector<std::string> col_names;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# label: ", 0) == 0) {
            trace.label = line.substr(9);
            continue;
        }
        if (line.rfind("# seed: ", 0) == 0) {
            trace.seed = std::stoull(line.substr(8));
            continue;
        }
        if (line.rfind("# config: ", 0) == 0) {
            trace.config_echo += line.substr(10) + '\n';
            continue;
        }
        if (line.front() == '#') continue;

        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);

        if (!header_done) {
            if (cells.size() < 3 || (cells.size() - 1) % 2 != 0) {
                throw std::runtime_error("trace csv: malformed header row");
            }
            trace.axis_name = cells[0];
            for (std::size_t i = 1; i < cells.size(); i += 2) {
                col_names.push_back(cells[i]);
                trace.columns.push_back(TraceColumn{cells[i], {}, {}});
            }
            header_done = true;
            continue;
        }
        if (cells.size() != 1 + 2 * trace.columns.size()) {
            throw std::runtime_error("trace csv: row width mismatch");
        }
        trace.axis.push_back(std::strtod(cells[0].c_str(), nullptr));
        for (std::size_t c = 0; c < trace.columns.size(); ++c) {
            trace.columns[c].values.push_back(std::strtod(cells[1 + 2 * c].c_str(), nullptr));
            trace.columns[c].stderrs.push_back(std::strtod(cells[2 + 2 * c].c_str(), nullptr));
        }
    }
    if (!header_done) throw std::runtime_error("trace csv: no header row found");
    return trace;
}

Trace load_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_trace_csv(ss.str());
}

std::string report_to_csv(const FisherReport& report) {
    std::string s;
    s += "# schema: ";
    s += kSchemaVersion;
    s += '\n';
    s += "# label: protocol comparison\n";
    s += "freq_khz,fi_resolute,fi_hahn,fi_ramsey,feasible\n";
    for (std::size_t i = 0; i < report.omega.size(); ++i) {
        s += fmt(omega_to_khz(report.omega[i]));
        s += ",";
        s += fmt(report.fi_resolute[i]);
        s += ",";
        s += fmt(report.fi_hahn[i]);
        s += ",";
        s += fmt(report.fi_ramsey[i]);
        s += ",";
        s += report.feasible[i] ? "1" : "0";
        s += '\n';
    }
    return s;
}

std::string report_to_json(const FisherReport& report) {
    nlohmann::json j;
    j["schema"] = kSchemaVersion;
    std::vector<double> freq_khz(report.omega.size());
    for (std::size_t i = 0; i < report.omega.size(); ++i) {
        freq_khz[i] = omega_to_khz(report.omega[i]);
    }
    j["freq_khz"] = freq_khz;
    j["fi_resolute"] = report.fi_resolute;
    j["fi_hahn"] = report.fi_hahn;
    j["fi_ramsey"] = report.fi_ramsey;
    j["crb_resolute"] = report.crb_resolute;
    j["crb_hahn"] = report.crb_hahn;
    j["crb_ramsey"] = report.crb_ramsey;
    std::vector<int> feas(report.feasible.size());
    for (std::size_t i = 0; i < feas.size(); ++i) feas[i] = report.feasible[i] ? 1 : 0;
    j["feasible"] = feas;
    j["params"] = {{"t2p_us", s_to_us(report.params.t2_p)},
                   {"t2_us", s_to_us(report.params.t2_hahn)},
                   {"t2star_us", s_to_us(report.params.t2_star)},
                   {"t1_us", s_to_us(report.params.t1)},
                   {"overhead_us", s_to_us(report.params.overhead)},
                   {"n_sequences", report.params.n_sequences},
                   {"amp_rad_per_us", report.params.amplitude * 1e-6},
                   {"contrast", report.params.contrast},
                   {"tau_resolute_us", s_to_us(report.params.tau_resolute)},
                   {"rayleigh_exponent", report.params.rayleigh_exponent}};
    return j.dump(2) + "\n";
}

void write_report(const FisherReport& report, const std::string& path, OutputFormat format) {
    write_text_atomic(path, format == OutputFormat::Json ? report_to_json(report)
                                                         : report_to_csv(report));
}

std::string fit_to_json(const FitResult& fit) {
    nlohmann::json j;
    j["model"] = fit.model;
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["residual_norm"] = fit.residual_norm;
    j["warnings"] = fit.warnings;
    j["params"] = nlohmann::json::array();
    for (std::size_t i = 0; i < fit.names.size(); ++i) {
        j["params"].push_back({{"name", fit.names[i]},
                               {"value", fit.values[i]},
                               {"sigma", fit.sigmas[i]},
                               {"reliable", fit.reliable.empty() ? true : bool(fit.reliable[i])}});
    }
    return j.dump(2) + "\n";
}

std::string crb_to_json(const CrbReport& report) {
    nlohmann::json j;
    j["n_replicas"] = report.n_replicas;
    j["mse_omega"] = report.mse_omega;
    j["crb_omega"] = report.crb_omega;
    j["ratio"] = report.ratio;
    j["mse_stat_sigma"] = report.mse_stat_sigma;
    j["passes"] = report.passes;
    j["super_efficient"] = report.super_efficient;
    return j.dump(2) + "\n";
}

std::string optimize_to_json(const OptimizeResult& result) {
    nlohmann::json j;
    j["tau_us"] = s_to_us(result.tau);
    j["tcorr_us"] = s_to_us(result.t_corr);
    j["info"] = result.info;
    j["warnings"] = result.warnings;
    j["ridges"] = nlohmann::json::array();
    for (const Ridge& r : result.ridges) {
        j["ridges"].push_back({{"tcorr_us", s_to_us(r.t_corr)}, {"info", r.info}});
    }
    return j.dump(2) + "\n";
}

}  // namespace resolute
