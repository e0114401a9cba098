#include "bellgame/config.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace bellgame::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) out.push_back(trim(item));
    return out;
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
        const std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer for '" + key + "': " + value);
    }
}

double parse_double(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for '" + key + "': " + value);
    }
}

std::vector<double> parse_double_list(const std::string& value, const std::string& key) {
    std::vector<double> out;
    for (const std::string& item : split_list(value)) out.push_back(parse_double(item, key));
    return out;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_double_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += format_double(values[i]);
    }
    return out;
}

void set_key(RunConfig& config, const std::string& section, const std::string& key,
             const std::string& value) {
    const std::string full = section.empty() ? key : section + "." + key;
    if (section.empty()) {
        if (key == "protocol") {
            if (value == "predictive")
                config.protocol = Protocol::predictive;
            else if (value == "locality")
                config.protocol = Protocol::locality;
            else if (value == "closed")
                config.protocol = Protocol::closed;
            else
                throw ConfigError("unknown protocol: " + value);
        } else if (key == "rounds") {
            config.rounds = parse_u64(value, full);
        } else if (key == "seed") {
            config.seed = parse_u64(value, full);
        } else if (key == "snapshot_stride") {
            config.snapshot_stride = parse_u64(value, full);
        } else if (key == "output") {
            if (value == "csv")
                config.output = OutputMode::csv;
            else if (value == "json")
                config.output = OutputMode::json;
            else if (value == "both")
                config.output = OutputMode::both;
            else
                throw ConfigError("unknown output mode: " + value);
        } else if (key == "history_mode") {
            if (value == "full")
                config.history = games::HistoryMode::full;
            else if (value == "summary")
                config.history = games::HistoryMode::summary;
            else
                throw ConfigError("unknown history mode: " + value);
        } else {
            throw ConfigError("unknown key: " + full);
        }
    } else if (section == "scientist") {
        if (key == "kind") {
            config.scientist.kind = value;
        } else if (key == "setting_policy") {
            if (value == "uniform")
                config.scientist.setting_policy = strategies::SettingChoice::uniform;
            else if (value == "round_robin")
                config.scientist.setting_policy = strategies::SettingChoice::round_robin;
            else
                throw ConfigError("unknown setting policy: " + value);
        } else {
            throw ConfigError("unknown key: " + full);
        }
    } else if (section == "nature") {
        if (key == "kind") {
            config.nature.kind = value;
        } else if (key == "fill_rule") {
            if (value == "uniform")
                config.nature.fill = FillRule::uniform;
            else if (value == "copy")
                config.nature.fill = FillRule::copy_partner;
            else
                throw ConfigError("unknown fill rule: " + value);
        } else if (key == "weights") {
            config.nature.weights = parse_double_list(value, full);
        } else if (key == "lambda") {
            config.nature.lambda = value;
        } else if (key == "p_quantum") {
            config.nature.p_quantum = parse_double(value, full);
        } else {
            throw ConfigError("unknown key: " + full);
        }
    } else if (section == "predictive") {
        if (key == "alphabet") {
            config.predictive.alphabet = parse_u64(value, full);
        } else if (key == "odds") {
            config.predictive.odds = parse_double_list(value, full);
        } else {
            throw ConfigError("unknown key: " + full);
        }
    } else {
        throw ConfigError("unknown section: [" + section + "]");
    }
}

void apply_defaults_and_validate(RunConfig& config) {
    if (config.rounds < 1) throw ConfigError("rounds must be >= 1");
    if (config.snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");

    switch (config.protocol) {
        case Protocol::closed:
            if (config.scientist.kind.empty()) config.scientist.kind = "forcing_closed";
            if (config.nature.kind.empty()) config.nature.kind = "quantum";
            if (config.scientist.kind != "forcing_closed")
                throw ConfigError("closed protocol supports scientist kind 'forcing_closed'");
            if (config.nature.kind != "quantum" && config.nature.kind != "md_lhv" &&
                config.nature.kind != "independent" && config.nature.kind != "deterministic" &&
                config.nature.kind != "mixture")
                throw ConfigError("unknown closed-game nature kind: " + config.nature.kind);
            if (config.nature.kind == "independent" && !config.nature.weights.empty() &&
                config.nature.weights.size() != 16)
                throw ConfigError("independent nature weights must have 16 entries");
            break;
        case Protocol::locality:
            if (config.scientist.kind.empty()) config.scientist.kind = "theorem2";
            if (config.nature.kind.empty()) config.nature.kind = "locality_exploit";
            if (config.scientist.kind != "theorem2")
                throw ConfigError("locality protocol supports scientist kind 'theorem2'");
            if (config.nature.kind != "locality_exploit" && config.nature.kind != "fixed_lambda")
                throw ConfigError("unknown locality nature kind: " + config.nature.kind);
            break;
        case Protocol::predictive:
            if (config.scientist.kind.empty()) config.scientist.kind = "kt";
            if (config.nature.kind.empty()) config.nature.kind = "iid";
            if (config.scientist.kind != "kt")
                throw ConfigError("predictive protocol supports scientist kind 'kt'");
            if (config.nature.kind != "iid")
                throw ConfigError("predictive protocol supports nature kind 'iid'");
            if (config.predictive.alphabet < 2) throw ConfigError("alphabet must be >= 2");
            if (!config.predictive.odds.empty() &&
                config.predictive.odds.size() != config.predictive.alphabet)
                throw ConfigError("odds must match the alphabet size");
            if (!config.nature.weights.empty() &&
                config.nature.weights.size() != config.predictive.alphabet)
                throw ConfigError("nature weights must match the alphabet size");
            break;
    }
    if (config.nature.kind == "deterministic" || config.nature.kind == "fixed_lambda") {
        try {
            HiddenVariable::from_string(config.nature.lambda);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("invalid lambda: ") + e.what());
        }
    }
    if (config.nature.kind == "mixture" &&
        (config.nature.p_quantum < 0.0 || config.nature.p_quantum > 1.0))
        throw ConfigError("p_quantum must lie in [0, 1]");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    std::string section;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            set_key(config, section, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    apply_defaults_and_validate(config);
    return config;
}

std::string emit_config(const RunConfig& config) {
    std::string out;
    out += "protocol = ";
    out += config.protocol == Protocol::predictive ? "predictive"
           : config.protocol == Protocol::locality ? "locality"
                                                   : "closed";
    out += "\nrounds = " + std::to_string(config.rounds);
    out += "\nseed = " + std::to_string(config.seed);
    out += "\nsnapshot_stride = " + std::to_string(config.snapshot_stride);
    out += "\noutput = ";
    out += config.output == OutputMode::csv    ? "csv"
           : config.output == OutputMode::json ? "json"
                                               : "both";
    out += "\nhistory_mode = ";
    out += config.history == games::HistoryMode::full ? "full" : "summary";

    out += "\n\n[scientist]\nkind = " + config.scientist.kind;
    out += "\nsetting_policy = ";
    out += config.scientist.setting_policy == strategies::SettingChoice::uniform ? "uniform"
                                                                                 : "round_robin";

    out += "\n\n[nature]\nkind = " + config.nature.kind;
    out += "\nfill_rule = ";
    out += config.nature.fill == FillRule::uniform ? "uniform" : "copy";
    if (!config.nature.weights.empty())
        out += "\nweights = " + format_double_list(config.nature.weights);
    out += "\nlambda = " + config.nature.lambda;
    out += "\np_quantum = " + format_double(config.nature.p_quantum);

    if (config.protocol == Protocol::predictive) {
        out += "\n\n[predictive]\nalphabet = " + std::to_string(config.predictive.alphabet);
        if (!config.predictive.odds.empty())
            out += "\nodds = " + format_double_list(config.predictive.odds);
    }
    out += "\n";
    return out;
}

void apply_override(RunConfig& config, const std::string& path, const std::string& value) {
    const std::size_t dot = path.find('.');
    const std::string section = dot == std::string::npos ? "" : path.substr(0, dot);
    const std::string key = dot == std::string::npos ? path : path.substr(dot + 1);
    set_key(config, section, key, value);
    apply_defaults_and_validate(config);
}

std::size_t ParameterGrid::point_count() const {
    std::size_t count = 1;
    for (const auto& [key, values] : axes) count *= values.size();
    return count;
}

std::vector<std::pair<std::string, std::string>> ParameterGrid::point(std::size_t i) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, values] : axes) {
        out.emplace_back(key, values[i % values.size()]);
        i /= values.size();
    }
    return out;
}

ParameterGrid parse_grid(const std::string& text) {
    ParameterGrid grid;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("grid line " + std::to_string(lineno) + ": expected key = values");
        const std::string key = trim(line.substr(0, eq));
        std::vector<std::string> values = split_list(line.substr(eq + 1));
        if (key.empty() || values.empty())
            throw ConfigError("grid line " + std::to_string(lineno) + ": empty axis");
        grid.axes.emplace_back(key, std::move(values));
    }
    if (grid.axes.empty()) throw ConfigError("empty parameter grid");
    return grid;
}

}  // namespace bellgame::cli
