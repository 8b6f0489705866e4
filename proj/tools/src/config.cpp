#include "cfheat_cli/config.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace cfheat::cli {

using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "alpha",           "k",
        "lambdas",         "q",
        "forcing",         "initial",
        "modes",           "nt",
        "nx",              "solver",
        "output_dir",      "mode_residual_tol",
        "grid_residual_tol", "compat_tol",
        "cross_check_tol", "quadrature_nodes",
        "richardson",      "time_steps",
        "companion_steps", "forcing_samples",
        "x_nodes"};
    return keys;
}

double get_real(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number()) {
        throw ConfigError("'" + key + "' must be a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ConfigError("'" + key + "' must be finite");
    }
    return d;
}

long long get_integer(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError("'" + key + "' must be an integer");
    }
    return v.get<long long>();
}

std::size_t get_count(const json& j, const std::string& key, long long min) {
    const long long v = get_integer(j, key);
    if (v < min) {
        throw ConfigError("'" + key + "' must be >= " + std::to_string(min));
    }
    return static_cast<std::size_t>(v);
}

double get_positive(const json& j, const std::string& key) {
    const double v = get_real(j, key);
    if (!(v > 0.0)) {
        throw ConfigError("'" + key + "' must be positive");
    }
    return v;
}

std::vector<double> get_vector(const json& v, const std::string& what) {
    if (!v.is_array()) {
        throw ConfigError(what + " must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) {
            throw ConfigError(what + " must be an array of numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

}  // namespace

std::string_view to_string(SolverChoice s) {
    switch (s) {
    case SolverChoice::automatic: return "auto";
    case SolverChoice::closed_form: return "closed-form";
    case SolverChoice::companion: return "companion";
    }
    return "unknown";
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!known_keys().count(key)) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    for (const char* required : {"alpha", "k", "lambdas", "forcing"}) {
        if (!j.contains(required)) {
            throw ConfigError(std::string("missing required config key '") + required + "'");
        }
    }

    RunConfig c;
    c.alpha = get_real(j, "alpha");
    c.k = static_cast<int>(get_count(j, "k", 0));
    c.lambdas = get_vector(j.at("lambdas"), "'lambdas'");
    if (!j.at("forcing").is_string()) {
        throw ConfigError("'forcing' must be an expression string");
    }
    c.forcing = j.at("forcing").get<std::string>();

    if (j.contains("q")) c.q = get_positive(j, "q");
    if (j.contains("modes")) c.modes = static_cast<int>(get_count(j, "modes", 1));
    if (j.contains("nt")) c.nt = get_count(j, "nt", 1);
    if (j.contains("nx")) c.nx = get_count(j, "nx", 2);
    if (j.contains("initial")) {
        const auto& v = j.at("initial");
        if (v.is_string()) {
            if (v.get<std::string>() != "zero") {
                throw ConfigError("'initial' must be \"zero\" or an array of per-mode arrays");
            }
        } else if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                c.initial.push_back(get_vector(v[i], "'initial' entry " + std::to_string(i + 1)));
            }
        } else {
            throw ConfigError("'initial' must be \"zero\" or an array of per-mode arrays");
        }
    }
    if (j.contains("solver")) {
        const auto& v = j.at("solver");
        const std::string s = v.is_string() ? v.get<std::string>() : "";
        if (s == "auto") c.solver = SolverChoice::automatic;
        else if (s == "closed-form") c.solver = SolverChoice::closed_form;
        else if (s == "companion") c.solver = SolverChoice::companion;
        else throw ConfigError("'solver' must be one of auto, closed-form, companion");
    }
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) {
            throw ConfigError("'output_dir' must be a string");
        }
        c.output_dir = j.at("output_dir").get<std::string>();
    }
    if (j.contains("mode_residual_tol")) c.mode_residual_tol = get_positive(j, "mode_residual_tol");
    if (j.contains("grid_residual_tol")) c.grid_residual_tol = get_positive(j, "grid_residual_tol");
    if (j.contains("compat_tol")) c.compat_tol = get_positive(j, "compat_tol");
    if (j.contains("cross_check_tol")) c.cross_check_tol = get_positive(j, "cross_check_tol");
    if (j.contains("quadrature_nodes")) c.quadrature_nodes = get_count(j, "quadrature_nodes", 3);
    if (j.contains("richardson")) {
        if (!j.at("richardson").is_boolean()) {
            throw ConfigError("'richardson' must be a boolean");
        }
        c.richardson = j.at("richardson").get<bool>();
    }
    if (j.contains("time_steps")) c.time_steps = get_count(j, "time_steps", 16);
    if (j.contains("companion_steps")) c.companion_steps = get_count(j, "companion_steps", 16);
    if (j.contains("forcing_samples")) c.forcing_samples = get_count(j, "forcing_samples", 1);
    if (j.contains("x_nodes")) c.x_nodes = get_count(j, "x_nodes", 3);
    if (c.richardson && (c.quadrature_nodes - 1) % 2 != 0) {
        throw ConfigError("'quadrature_nodes' needs an even number of intervals with richardson");
    }
    if (c.x_nodes % 2 == 0) {
        throw ConfigError("'x_nodes' must be odd");
    }
    return c;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

ProblemSpec to_problem(const RunConfig& c) {
    ProblemSpec spec;
    spec.order = FractionalOrder(c.alpha);
    spec.k = c.k;
    spec.lambdas = c.lambdas;
    spec.horizon = c.q;
    spec.forcing = ForcingField::parse(c.forcing, c.q);
    spec.initial = c.initial;
    spec.modes = c.modes;
    spec.nt = c.nt;
    spec.nx = c.nx;
    if (spec.initial.size() > static_cast<std::size_t>(spec.modes)) {
        throw ProblemError("initial data given for more modes than M");
    }
    spec.validate();
    return spec;
}

}  // namespace cfheat::cli
