#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ldgmq/code.hpp"

namespace ldgmq {

using nlohmann::json;

inline json to_json(const degree_dist& d) {
    json j;
    j["K"] = d.K;
    j["R"] = d.R;
    j["d_b"] = d.d_b;
    json v = json::array();
    for (auto& [deg, vd] : d.v)
        if (vd > 1e-12) v.push_back({deg, vd});
    j["v"] = v;
    j["threshold"] = d.threshold;
    if (!d.method.empty()) j["method"] = d.method;
    if (d.pace_l0) j["pace_L0"] = d.pace_l0;
    return j;
}

inline degree_dist dist_from_json(const json& j) {
    degree_dist d;
    d.K = j.at("K").get<int>();
    d.R = j.at("R").get<double>();
    d.d_b = j.at("d_b").get<int>();
    for (auto& e : j.at("v")) d.v.push_back({e.at(0).get<int>(), e.at(1).get<double>()});
    std::sort(d.v.begin(), d.v.end());
    d.threshold = j.value("threshold", 0.0);
    d.method = j.value("method", std::string());
    d.pace_l0 = j.value("pace_L0", 0);
    d.validate();
    return d;
}

inline void save_json(const json& j, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << j.dump(2) << "\n";
}

inline json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    return json::parse(f);
}

inline void save_dist(const degree_dist& d, const std::string& path) { save_json(to_json(d), path); }
inline degree_dist load_dist(const std::string& path) { return dist_from_json(load_json(path)); }

// Code text format:
//   line 1: n n_b K d_b seed
//   line 2: degree distribution as d:v_d pairs
//   then n_b lines of space-separated check indices (0-based)
inline std::string serialize_code(const ldgm_code& code) {
    std::ostringstream os;
    os << code.n << ' ' << code.n_b << ' ' << code.K << ' ' << code.d_b << ' ' << code.seed << '\n';
    bool first = true;
    for (auto& [d, vd] : code.dist_v) {
        if (vd <= 1e-12) continue;
        if (!first) os << ' ';
        first = false;
        os << d << ':' << vd;
    }
    os << '\n';
    for (auto& row : code.rows) {
        for (std::size_t k = 0; k < row.size(); ++k)
            os << (k ? " " : "") << row[k];
        os << '\n';
    }
    return os.str();
}

inline ldgm_code parse_code(std::istream& is) {
    ldgm_code code;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("code file: missing header");
    {
        std::istringstream h(line);
        if (!(h >> code.n >> code.n_b >> code.K >> code.d_b >> code.seed))
            throw std::runtime_error("code file: bad header");
    }
    if (!std::getline(is, line)) throw std::runtime_error("code file: missing distribution");
    {
        std::istringstream h(line);
        std::string tok;
        while (h >> tok) {
            auto colon = tok.find(':');
            if (colon == std::string::npos) throw std::runtime_error("code file: bad d:v pair");
            code.dist_v.push_back({std::stoi(tok.substr(0, colon)), std::stod(tok.substr(colon + 1))});
        }
    }
    code.rows.resize(code.n_b);
    for (int i = 0; i < code.n_b; ++i) {
        if (!std::getline(is, line)) throw std::runtime_error("code file: truncated edge list");
        std::istringstream h(line);
        std::int32_t j;
        while (h >> j) {
            if (j < 0 || j >= code.n_c()) throw std::runtime_error("code file: check index out of range");
            code.rows[i].push_back(j);
        }
    }
    return code;
}

inline void save_code(const ldgm_code& code, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << serialize_code(code);
}

inline ldgm_code load_code(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    return parse_code(f);
}

inline std::uint64_t code_hash(const ldgm_code& code) { return fnv1a(serialize_code(code)); }

} // namespace ldgmq
