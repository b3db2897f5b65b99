#include "qpt/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qpt/errors.hpp"

namespace qpt::cli {

using nlohmann::json;

int ExactControls::cutoff_for(int n) const {
    if (n_b) return *n_b;
    return std::max(2, int(std::lround(nb_factor * n)));
}

Side RunConfig::side_or_default() const { return side.value_or(model == Model::Lmg ? Side::Above : Side::Below); }

std::string to_string(Model m) { return m == Model::Dicke ? "dicke" : "lmg"; }

std::string to_string(Task t) {
    switch (t) {
        case Task::Fidelity: return "fidelity";
        case Task::Echo: return "echo";
        case Task::Converge: return "converge";
        case Task::Collapse: return "collapse";
        default: return "sweep";
    }
}

std::string to_string(Model m, Side s) {
    if (s == Side::Both) return "both";
    if (m == Model::Dicke) return s == Side::Below ? "normal" : "superradiant";
    return s == Side::Below ? "broken" : "symmetric";
}

Model parse_model(const std::string& s) {
    if (s == "dicke") return Model::Dicke;
    if (s == "lmg") return Model::Lmg;
    throw InputError("unknown model '" + s + "' (expected dicke or lmg)");
}

Task parse_task(const std::string& s) {
    for (Task t : {Task::Fidelity, Task::Echo, Task::Converge, Task::Collapse, Task::Sweep})
        if (to_string(t) == s) return t;
    throw InputError("unknown task '" + s + "' (expected fidelity, echo, converge, collapse or sweep)");
}

Side parse_side(const std::string& s) {
    if (s == "normal" || s == "broken") return Side::Below;
    if (s == "superradiant" || s == "symmetric") return Side::Above;
    if (s == "both") return Side::Both;
    throw InputError("unknown phase '" + s + "' (expected normal, superradiant, symmetric, broken or both)");
}

void validate(const RunConfig& c, const Locator& where) {
    auto fail = [&](const std::string& key, const std::string& msg) {
        throw InputError((where ? where(key) : std::string()) + key + ": " + msg);
    };
    if (c.model == Model::Dicke) {
        if (!(c.omega > 0) || !std::isfinite(c.omega)) fail("omega", "must be positive");
        if (!(c.omega0 > 0) || !std::isfinite(c.omega0)) fail("omega0", "must be positive");
    } else if (!(c.gamma >= 0 && c.gamma < 1)) {
        fail("gamma", "must lie in [0, 1)");
    }
    for (const auto& [a, b] : c.pairs) {
        if (!std::isfinite(a) || !std::isfinite(b) || a < 0 || b < 0) fail("pairs", "entries must be finite and non-negative");
        if (c.model == Model::Lmg && (a <= 0 || b <= 0)) fail("pairs", "LMG fields must be positive");
    }
    for (double e : c.etas)
        if (!(e > 0) || !std::isfinite(e)) fail("etas", "must be positive and finite");
    for (double s : c.scales)
        if (!(s > 0 && s < 1)) fail("scales", "must lie in (0, 1)");

    const bool generated = !c.etas.empty() || !c.scales.empty();
    if (generated && (c.etas.empty() || c.scales.empty()))
        fail(c.etas.empty() ? "etas" : "scales", "etas and scales must both be non-empty");
    if (generated && !c.pairs.empty()) fail("pairs", "give either explicit pairs or etas with scales, not both");
    if (generated) {
        const Side side = c.side_or_default();
        for (double e : c.etas)
            for (double s : c.scales) {
                if ((side == Side::Below || side == Side::Both) && e * s >= 1.0)
                    fail("etas", "eta * scale must stay below 1 on the lower side of the critical point");
                if (c.model == Model::Lmg && (side == Side::Below || side == Side::Both)) {
                    const double h = 1.0 - std::max(e, 1.0) * s;
                    if (!(h * h > c.gamma)) fail("scales", "broken-phase fields must satisfy h^2 > gamma");
                }
            }
    }

    switch (c.task) {
        case Task::Converge:
            if (c.model != Model::Dicke) fail("task", "converge is available for the Dicke model only");
            if (c.pairs.size() != 1) fail("pairs", "converge takes exactly one coupling pair");
            if (c.exact.N.empty()) fail("exact.N", "converge needs at least one N");
            break;
        case Task::Collapse:
            if (!generated) fail("etas", "collapse groups series by eta; give etas and scales");
            break;
        case Task::Sweep:
            if (!generated) fail("etas", "sweep needs non-empty etas and scales");
            break;
        default:
            if (!generated && c.pairs.empty()) fail("pairs", "no parameter pairs (give pairs, or etas with scales)");
    }
    if (c.exact.enabled || c.task == Task::Converge) {
        if (c.model != Model::Dicke) fail("exact", "exact diagonalisation is available for the Dicke model only");
        if (c.exact.N.empty()) fail("exact.N", "must list at least one N");
        if (c.task != Task::Converge && c.exact.N.size() != 1) fail("exact.N", "this task uses exactly one N");
        for (std::size_t i = 0; i < c.exact.N.size(); ++i) {
            if (c.exact.N[i] < 1) fail("exact.N", "must be positive");
            if (i && c.exact.N[i] <= c.exact.N[i - 1]) fail("exact.N", "must be strictly ascending");
        }
    }
    if (!(c.exact.nb_factor > 0)) fail("exact.nb_factor", "must be positive");
    if (c.exact.n_b && *c.exact.n_b < 2) fail("exact.n_b", "must be at least 2");
    if (c.exact.dense_threshold < 1) fail("exact.dense_threshold", "must be positive");
    if (c.exact.reference != "scaling" && c.exact.reference != "gaussian")
        fail("exact.reference", "must be scaling or gaussian");
    if (!(c.time.periods > 0) || !std::isfinite(c.time.periods)) fail("time.periods", "must be positive");
    if (c.time.samples_per_period < 4) fail("time.samples_per_period", "must be at least 4");
    if (c.threads < 1) fail("threads", "must be at least 1");
}

namespace {

std::size_t line_at(const std::string& text, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

// Line of a dotted key path: each component is searched as a quoted string
// after the previous one.
std::string locate(const std::string& text, const std::string& path) {
    std::size_t pos = 0;
    std::size_t start = 0;
    while (start <= path.size()) {
        const std::size_t dot = path.find('.', start);
        const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        const std::size_t hit = text.find("\"" + part + "\"", pos);
        if (hit == std::string::npos) break;
        pos = hit;
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return "line " + std::to_string(line_at(text, pos)) + ": ";
}

const std::set<std::string> kTopKeys = {"model", "task", "omega", "omega0", "gamma", "pairs", "etas", "scales",
                                        "phase", "exact", "time", "output", "threads", "$schema", "description"};
const std::set<std::string> kExactKeys = {"enabled", "N", "nb_factor", "n_b", "dense_threshold", "reference"};
const std::set<std::string> kTimeKeys = {"periods", "samples_per_period"};
const std::set<std::string> kOutputKeys = {"csv", "json"};

}  // namespace

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        throw InputError("line " + std::to_string(line_at(text, byte)) + ": JSON syntax error: " + e.what());
    }
    const Locator where = [&](const std::string& key) { return locate(text, key); };
    auto fail = [&](const std::string& key, const std::string& msg) -> void {
        throw InputError(where(key) + key + ": " + msg);
    };
    if (!doc.is_object()) throw InputError("line 1: configuration must be a JSON object");

    auto check_keys = [&](const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
        if (!obj.is_object()) fail(prefix, "must be an object");
        for (const auto& [k, v] : obj.items())
            if (!allowed.count(k)) fail(prefix.empty() ? k : prefix + "." + k, "unknown key");
    };
    check_keys(doc, kTopKeys, "");

    auto get = [&]<typename T>(const json& obj, const char* key, const std::string& path, T& dst) {
        if (!obj.contains(key)) return;
        try {
            dst = obj.at(key).get<T>();
        } catch (const json::exception&) {
            fail(path, "has the wrong type");
        }
    };
    auto number = [&](const json& obj, const char* key, const std::string& path, double& dst) {
        if (!obj.contains(key)) return;
        if (!obj.at(key).is_number()) fail(path, "must be a number");
        dst = obj.at(key).get<double>();
    };
    auto numbers = [&](const json& obj, const char* key, const std::string& path, std::vector<double>& dst) {
        if (!obj.contains(key)) return;
        const json& a = obj.at(key);
        if (!a.is_array()) fail(path, "must be an array of numbers");
        for (const auto& v : a) {
            if (!v.is_number()) fail(path, "must be an array of numbers");
            dst.push_back(v.get<double>());
        }
    };

    RunConfig c;
    std::string s;
    auto parse_field = [&](const char* key, auto parse) {
        get(doc, key, key, s);
        try {
            return parse(s);
        } catch (const InputError& e) {
            throw InputError(where(key) + e.what());
        }
    };
    if (!doc.contains("model")) fail("model", "is required");
    if (!doc.contains("task")) fail("task", "is required");
    c.model = parse_field("model", parse_model);
    c.task = parse_field("task", parse_task);
    if (doc.contains("phase")) c.side = parse_field("phase", parse_side);
    number(doc, "omega", "omega", c.omega);
    number(doc, "omega0", "omega0", c.omega0);
    number(doc, "gamma", "gamma", c.gamma);
    if (doc.contains("pairs")) {
        const json& a = doc.at("pairs");
        if (!a.is_array()) fail("pairs", "must be an array of [p1, p2] pairs");
        for (const auto& p : a) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                fail("pairs", "must be an array of [p1, p2] pairs");
            c.pairs.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
    }
    numbers(doc, "etas", "etas", c.etas);
    numbers(doc, "scales", "scales", c.scales);
    if (doc.contains("etas") && c.etas.empty()) fail("etas", "must not be empty");
    if (doc.contains("scales") && c.scales.empty()) fail("scales", "must not be empty");
    if (doc.contains("threads")) {
        if (!doc.at("threads").is_number_integer()) fail("threads", "must be an integer");
        c.threads = doc.at("threads").get<int>();
    }
    if (doc.contains("exact")) {
        const json& e = doc.at("exact");
        check_keys(e, kExactKeys, "exact");
        get(e, "enabled", "exact.enabled", c.exact.enabled);
        if (e.contains("N")) {
            if (!e.at("N").is_array()) fail("exact.N", "must be an array of integers");
            for (const auto& v : e.at("N")) {
                if (!v.is_number_integer()) fail("exact.N", "must be an array of integers");
                c.exact.N.push_back(v.get<int>());
            }
        }
        number(e, "nb_factor", "exact.nb_factor", c.exact.nb_factor);
        if (e.contains("n_b")) {
            if (!e.at("n_b").is_number_integer()) fail("exact.n_b", "must be an integer");
            c.exact.n_b = e.at("n_b").get<int>();
        }
        if (e.contains("dense_threshold")) {
            if (!e.at("dense_threshold").is_number_integer()) fail("exact.dense_threshold", "must be an integer");
            c.exact.dense_threshold = e.at("dense_threshold").get<long>();
        }
        get(e, "reference", "exact.reference", c.exact.reference);
    }
    if (doc.contains("time")) {
        const json& t = doc.at("time");
        check_keys(t, kTimeKeys, "time");
        number(t, "periods", "time.periods", c.time.periods);
        if (t.contains("samples_per_period")) {
            if (!t.at("samples_per_period").is_number_integer()) fail("time.samples_per_period", "must be an integer");
            c.time.samples_per_period = t.at("samples_per_period").get<int>();
        }
    }
    if (doc.contains("output")) {
        const json& o = doc.at("output");
        check_keys(o, kOutputKeys, "output");
        get(o, "csv", "output.csv", c.csv);
        get(o, "json", "output.json", c.json);
    }
    validate(c, where);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open configuration " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const CrossPhaseError&) {
        throw;
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::string canonical_json(const RunConfig& c) {
    json doc;
    doc["model"] = to_string(c.model);
    doc["task"] = to_string(c.task);
    if (c.model == Model::Dicke) {
        doc["omega"] = c.omega;
        doc["omega0"] = c.omega0;
    } else {
        doc["gamma"] = c.gamma;
    }
    doc["pairs"] = json::array();
    for (const auto& [a, b] : c.pairs) doc["pairs"].push_back({a, b});
    doc["etas"] = c.etas;
    doc["scales"] = c.scales;
    doc["phase"] = to_string(c.model, c.side_or_default());
    doc["exact"] = {{"enabled", c.exact.enabled},
                    {"N", c.exact.N},
                    {"nb_factor", c.exact.nb_factor},
                    {"n_b", c.exact.n_b ? json(*c.exact.n_b) : json(nullptr)},
                    {"dense_threshold", c.exact.dense_threshold},
                    {"reference", c.exact.reference}};
    doc["time"] = {{"periods", c.time.periods}, {"samples_per_period", c.time.samples_per_period}};
    return doc.dump();
}

std::string config_hash(const RunConfig& config) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char ch : canonical_json(config)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace qpt::cli
