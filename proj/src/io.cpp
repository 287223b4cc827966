#include "fluxbvp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fluxbvp::io {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_shortest(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed: " + path);
}

std::string samples_to_csv(const std::vector<ShootState>& samples) {
    std::string out = "t,f,fp,fpp\n";
    for (const ShootState& s : samples) {
        out += fmt17(s.t);
        out += ',';
        out += fmt17(s.f);
        out += ',';
        out += fmt17(s.fp);
        out += ',';
        out += fmt17(s.fpp);
        out += '\n';
    }
    return out;
}

std::vector<ShootState> resample_uniform(const Trajectory& traj, double t_end,
                                         int n) {
    if (n < 1) throw std::invalid_argument("resample_uniform: n must be >= 1");
    const double lo = traj.start_time();
    if (t_end < lo || t_end > traj.final_time())
        throw OutOfRange("resample_uniform: t_end outside the computed range");
    std::vector<ShootState> out;
    out.reserve(static_cast<std::size_t>(n));
    if (n == 1 || t_end == lo) {
        out.push_back(traj.at(lo));
        return out;
    }
    for (int i = 0; i < n; ++i)
        out.push_back(traj.at(lo + (t_end - lo) * static_cast<double>(i) / (n - 1)));
    return out;
}

namespace {

double parse_double(const std::string& tok, const std::string& what) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw std::invalid_argument("bad number in " + what + ": '" + tok + "'");
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<ShootState> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "t,f,fp,fpp")
        throw std::invalid_argument("csv: expected header 't,f,fp,fpp'");
    std::vector<ShootState> out;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::istringstream row(line);
        std::string tok;
        double vals[4];
        for (int i = 0; i < 4; ++i) {
            if (!std::getline(row, tok, ','))
                throw std::invalid_argument("csv: short row '" + line + "'");
            vals[i] = parse_double(trim(tok), "csv row");
        }
        if (std::getline(row, tok, ','))
            throw std::invalid_argument("csv: extra column in '" + line + "'");
        out.push_back({vals[0], vals[1], vals[2], vals[3]});
    }
    return out;
}

std::string report_to_text(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::string report_to_json(const std::vector<std::pair<std::string, std::string>>& kv) {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : kv) j[k] = v;
    return j.dump(2) + "\n";
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": empty key");
        out[key] = val;
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace fluxbvp::io
