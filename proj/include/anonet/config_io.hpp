#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "anonet/evolution.hpp"

namespace anonet {

inline const char* crossover_name(CrossoverMode mode) {
    return mode == CrossoverMode::Uniform ? "uniform" : "c-point";
}

inline CrossoverMode parse_crossover(const std::string& s) {
    if (s == "uniform") return CrossoverMode::Uniform;
    if (s == "c-point") return CrossoverMode::CPoint;
    throw std::invalid_argument("config: crossover must be 'c-point' or 'uniform', got '" + s + "'");
}

inline const char* selection_name(SelectionMode mode) {
    switch (mode) {
        case SelectionMode::Roulette: return "roulette";
        case SelectionMode::Tournament: return "tournament";
        default: return "mu-plus-lambda";
    }
}

inline SelectionMode parse_selection(const std::string& s) {
    if (s == "roulette") return SelectionMode::Roulette;
    if (s == "tournament") return SelectionMode::Tournament;
    if (s == "mu-plus-lambda") return SelectionMode::MuPlusLambda;
    throw std::invalid_argument(
        "config: selection must be 'roulette', 'tournament' or 'mu-plus-lambda', got '" + s + "'");
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t lo = 0;
    std::size_t hi = s.size();
    while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
    return s.substr(lo, hi - lo);
}

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& key, const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for " + key + ": '" + s + "'");
    }
}

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& s) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer value for " + key + ": '" + s + "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw std::invalid_argument("config: bad boolean value for " + key + ": '" + s + "'");
}

}  // namespace detail

// Flat key=value format; '#' starts a comment, blank lines are skipped,
// unlisted keys keep their defaults, unknown keys are rejected.
inline GaConfig parse_config(std::istream& in) {
    GaConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = detail::trim(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not of the form key = value");
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));

        if (key == "mu") cfg.mu = static_cast<std::uint32_t>(detail::parse_unsigned(key, value));
        else if (key == "p_init") cfg.p_init = detail::parse_double(key, value);
        else if (key == "lambda") cfg.lambda = static_cast<std::uint32_t>(detail::parse_unsigned(key, value));
        else if (key == "crossover") cfg.crossover = parse_crossover(value);
        else if (key == "c") cfg.c = static_cast<std::uint32_t>(detail::parse_unsigned(key, value));
        else if (key == "alpha0") cfg.alpha0 = detail::parse_double(key, value);
        else if (key == "eta") cfg.eta = detail::parse_double(key, value);
        else if (key == "parental") cfg.parental = parse_selection(value);
        else if (key == "environmental") cfg.environmental = parse_selection(value);
        else if (key == "tournament_t") cfg.tournament_t = static_cast<std::uint32_t>(detail::parse_unsigned(key, value));
        else if (key == "gamma_frac") cfg.gamma_frac = detail::parse_double(key, value);
        else if (key == "tau") cfg.tau = static_cast<std::uint32_t>(detail::parse_unsigned(key, value));
        else if (key == "uniqueness_aware") cfg.uniqueness_aware = detail::parse_bool(key, value);
        else if (key == "seed") cfg.seed = detail::parse_unsigned(key, value);
        else throw std::invalid_argument("config: unknown key '" + key + "' on line " + std::to_string(lineno));
    }
    cfg.validate();
    return cfg;
}

inline void write_config(std::ostream& out, const GaConfig& cfg) {
    out << "mu = " << cfg.mu << "\n";
    out << "p_init = " << detail::format_double(cfg.p_init) << "\n";
    out << "lambda = " << cfg.lambda << "\n";
    out << "crossover = " << crossover_name(cfg.crossover) << "\n";
    out << "c = " << cfg.c << "\n";
    out << "alpha0 = " << detail::format_double(cfg.alpha0) << "\n";
    out << "eta = " << detail::format_double(cfg.eta) << "\n";
    out << "parental = " << selection_name(cfg.parental) << "\n";
    out << "environmental = " << selection_name(cfg.environmental) << "\n";
    out << "tournament_t = " << cfg.tournament_t << "\n";
    out << "gamma_frac = " << detail::format_double(cfg.gamma_frac) << "\n";
    out << "tau = " << cfg.tau << "\n";
    out << "uniqueness_aware = " << (cfg.uniqueness_aware ? "true" : "false") << "\n";
    out << "seed = " << cfg.seed << "\n";
}

// Shipped configurations. conf1..conf4 are the tuned settings (crossover
// operator x decay rate, everything else shared); table1 is the headline
// setting with its mutation parameters taken at face value.
inline std::vector<std::string> preset_names() {
    return {"conf1", "conf2", "conf3", "conf4", "table1"};
}

inline GaConfig preset(const std::string& name) {
    GaConfig cfg;
    cfg.mu = 100;
    cfg.p_init = 0.005;
    cfg.lambda = 150;
    cfg.c = 25;
    cfg.alpha0 = 0.0005;
    cfg.parental = SelectionMode::Roulette;
    cfg.environmental = SelectionMode::MuPlusLambda;
    cfg.tournament_t = 5;
    cfg.gamma_frac = 0.05;
    cfg.tau = 40;
    cfg.uniqueness_aware = false;
    cfg.seed = 1;

    if (name == "conf1") {
        cfg.crossover = CrossoverMode::Uniform;
        cfg.eta = 0.000025;
    } else if (name == "conf2") {
        cfg.crossover = CrossoverMode::CPoint;
        cfg.eta = 0.000025;
    } else if (name == "conf3") {
        cfg.crossover = CrossoverMode::Uniform;
        cfg.eta = 0.00001;
    } else if (name == "conf4") {
        cfg.crossover = CrossoverMode::CPoint;
        cfg.eta = 0.00001;
    } else if (name == "table1") {
        cfg.crossover = CrossoverMode::CPoint;
        cfg.alpha0 = 0.05;
        cfg.eta = 0.001;
    } else {
        throw std::invalid_argument(
            "unknown preset '" + name + "' (available: conf1, conf2, conf3, conf4, table1)");
    }
    return cfg;
}

}  // namespace anonet
