/*
   Copyright 2026 The sddestab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "sddestab/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "sddestab/registry.hpp"

namespace sddestab {

namespace {

std::string join(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) {
        if (!out.empty()) out += "\n";
        out += l;
    }
    return out;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

bool parse_double(const std::string& token, double& out) {
    if (token.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(token.c_str(), &end);
    return errno == 0 && end == token.c_str() + token.size() && std::isfinite(out);
}

bool parse_unsigned(const std::string& token, std::uint64_t& out) {
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtoull(token.c_str(), &end, 10);
    return errno == 0 && end == token.c_str() + token.size();
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : value) {
        if (ch == ',' || ch == ' ' || ch == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

struct Entry {
    std::string value;
    std::size_t line;
};

const std::set<std::string> kSections = {"problem", "delay", "grid",  "mc",
                                         "pair",    "analysis", "output"};

const std::map<std::string, std::set<std::string>> kKeys = {
    {"delay", {"kind", "tau", "q", "i", "table_t", "table_tau", "tau_max"}},
    {"grid", {"a", "b", "N"}},
    {"mc", {"paths", "seed"}},
    {"pair", {"xi", "eta"}},
    {"analysis", {"c0", "mu", "slack", "probes", "envelope", "steps", "order_steps"}},
    {"output", {"dir"}},
};

const std::set<std::string> kDelayKinds = {"constant", "pantograph", "piecewise_constant",
                                           "tabulated"};

const std::set<std::string> kInitialFamilies = {"constant", "poly", "sin"};

class Reader {
  public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    std::vector<std::string> errors;

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string where(const std::string& key) const {
        return "line " + std::to_string(entries_.at(key).line) + ": ";
    }

    void require(const std::string& key) {
        if (!has(key)) errors.push_back("missing required key " + key);
    }

    std::string text(const std::string& key, std::string fallback) {
        return has(key) ? entries_.at(key).value : fallback;
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        double v = 0.0;
        if (!parse_double(entries_.at(key).value, v)) {
            errors.push_back(where(key) + key + " must be a finite number");
            return fallback;
        }
        return v;
    }

    std::size_t positive_integer(const std::string& key, std::size_t fallback) {
        if (!has(key)) return fallback;
        std::uint64_t v = 0;
        if (!parse_unsigned(entries_.at(key).value, v) || v == 0) {
            errors.push_back(where(key) + key + " must be a positive integer");
            return fallback;
        }
        return static_cast<std::size_t>(v);
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        std::uint64_t v = 0;
        if (!parse_unsigned(entries_.at(key).value, v)) {
            errors.push_back(where(key) + key + " must be an unsigned 64-bit integer");
            return fallback;
        }
        return v;
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
        if (!has(key)) return fallback;
        std::vector<double> out;
        for (const auto& tok : split_list(entries_.at(key).value)) {
            double v = 0.0;
            if (!parse_double(tok, v)) {
                errors.push_back(where(key) + key + " must be a list of finite numbers");
                return fallback;
            }
            out.push_back(v);
        }
        if (out.empty()) errors.push_back(where(key) + key + " must not be empty");
        return out;
    }

  private:
    std::map<std::string, Entry> entries_;
};

void check_initial(Reader& rd, const std::string& key, const std::string& value) {
    const auto tokens = split_list(value);
    const std::string prefix = rd.has(key) ? rd.where(key) : std::string();
    if (tokens.empty() || !kInitialFamilies.count(tokens[0])) {
        rd.errors.push_back(prefix + key + " must start with one of constant, poly, sin");
        return;
    }
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        double v = 0.0;
        if (!parse_double(tokens[i], v)) {
            rd.errors.push_back(prefix + key + " has a non-numeric parameter '" + tokens[i] + "'");
            return;
        }
    }
    const std::size_t n = tokens.size() - 1;
    if (tokens[0] == "sin" && n != 4)
        rd.errors.push_back(prefix + key + " sin needs: offset amplitude omega phase");
    else if (n == 0)
        rd.errors.push_back(prefix + key + " needs at least one numeric parameter");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> messages)
    : Error(join(messages)), messages_(std::move(messages)) {}

ExperimentConfig parse_config(std::string_view text) {
    std::vector<std::string> errors;
    std::map<std::string, Entry> entries;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos)
            raw = raw.substr(0, hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        const std::string where = "line " + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back(where + "expected 'section.key = value'");
            continue;
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto dot = key.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == key.size()) {
            errors.push_back(where + "key '" + key + "' must have the form section.key");
            continue;
        }
        const std::string section = key.substr(0, dot);
        const std::string name = key.substr(dot + 1);
        if (!kSections.count(section)) {
            errors.push_back(where + "unknown section '" + section + "' in key " + key);
            continue;
        }
        if (auto it = kKeys.find(section); it != kKeys.end() && !it->second.count(name)) {
            errors.push_back(where + "unknown key " + key);
            continue;
        }
        if (value.empty()) {
            errors.push_back(where + key + " has an empty value");
            continue;
        }
        if (auto it = entries.find(key); it != entries.end()) {
            errors.push_back(where + "duplicate key " + key + " (first set on line " +
                             std::to_string(it->second.line) + ")");
            continue;
        }
        entries.emplace(key, Entry{value, line_no});
    }

    // problem.* keys depend on the family
    std::vector<std::string> problem_keys;
    for (const auto& [key, entry] : entries)
        if (key.rfind("problem.", 0) == 0 && key != "problem.name") problem_keys.push_back(key);

    Reader rd(entries);
    rd.errors = std::move(errors);
    ExperimentConfig cfg;

    rd.require("problem.name");
    rd.require("grid.b");
    rd.require("grid.N");
    rd.require("mc.paths");

    cfg.problem = rd.text("problem.name", "");
    const ProblemRegistryEntry* family = nullptr;
    if (!cfg.problem.empty()) {
        family = find_problem(cfg.problem);
        if (!family) {
            std::string known;
            for (const auto& e : problem_registry()) known += (known.empty() ? "" : ", ") + e.name;
            rd.errors.push_back(rd.where("problem.name") + "unknown problem '" + cfg.problem +
                                "' (registered: " + known + ")");
        }
    }
    for (const auto& key : problem_keys) {
        const std::string name = key.substr(8);
        if (family &&
            std::find(family->keys.begin(), family->keys.end(), name) == family->keys.end()) {
            rd.errors.push_back(rd.where(key) + "unknown key " + key + " for problem '" +
                                cfg.problem + "'");
            continue;
        }
        cfg.params[name] = rd.numbers(key, {});
    }

    // delay section
    const bool any_delay = std::any_of(entries.begin(), entries.end(), [](const auto& kv) {
        return kv.first.rfind("delay.", 0) == 0;
    });
    if (any_delay) {
        cfg.delay = DelayConfig{};
        cfg.delay.tau.clear();
        rd.require("delay.kind");
        cfg.delay.kinds = split_list(rd.text("delay.kind", ""));
        std::size_t counts[4] = {0, 0, 0, 0};
        for (const auto& k : cfg.delay.kinds) {
            if (!kDelayKinds.count(k)) {
                rd.errors.push_back(rd.where("delay.kind") + "unknown delay kind '" + k +
                                    "' (constant, pantograph, piecewise_constant, tabulated)");
                continue;
            }
            if (k == "constant") ++counts[0];
            if (k == "pantograph") ++counts[1];
            if (k == "piecewise_constant") ++counts[2];
            if (k == "tabulated") ++counts[3];
        }
        cfg.delay.tau = rd.numbers("delay.tau", {});
        cfg.delay.q = rd.numbers("delay.q", {});
        cfg.delay.shift = rd.numbers("delay.i", {});
        cfg.delay.table_t = rd.numbers("delay.table_t", {});
        cfg.delay.table_tau = rd.numbers("delay.table_tau", {});
        cfg.delay.tau_max = rd.number("delay.tau_max", -1.0);
        auto expect = [&](const char* key, std::size_t have, std::size_t want, const char* kind) {
            if (have != want)
                rd.errors.push_back(std::string(key) + " needs " + std::to_string(want) +
                                    " value(s), one per " + kind + " delay, got " +
                                    std::to_string(have));
        };
        expect("delay.tau", cfg.delay.tau.size(), counts[0], "constant");
        expect("delay.q", cfg.delay.q.size(), counts[1], "pantograph");
        expect("delay.i", cfg.delay.shift.size(), counts[2], "piecewise_constant");
        if (counts[3] > 1) rd.errors.push_back("delay.kind allows at most one tabulated delay");
        if (counts[3] == 1 && (cfg.delay.table_t.empty() ||
                               cfg.delay.table_t.size() != cfg.delay.table_tau.size()))
            rd.errors.push_back(
                "tabulated delay needs delay.table_t and delay.table_tau of equal length");
        for (double s : cfg.delay.shift)
            if (s < 0.0 || s != std::floor(s))
                rd.errors.push_back(rd.where("delay.i") +
                                    "delay.i entries must be nonnegative integers");
        if (rd.has("delay.tau_max") && cfg.delay.tau_max < 0.0)
            rd.errors.push_back(rd.where("delay.tau_max") + "delay.tau_max must be >= 0");
    }

    cfg.a = rd.number("grid.a", 0.0);
    cfg.b = rd.number("grid.b", 1.0);
    cfg.steps = rd.positive_integer("grid.N", 1);
    if (rd.has("grid.b") && !(cfg.b > cfg.a))
        rd.errors.push_back(rd.where("grid.b") + "grid.b must exceed grid.a");

    cfg.paths = rd.positive_integer("mc.paths", 1);
    cfg.seed = rd.unsigned_integer("mc.seed", 0);

    cfg.xi = rd.text("pair.xi", cfg.xi);
    cfg.eta = rd.text("pair.eta", cfg.eta);
    check_initial(rd, "pair.xi", cfg.xi);
    check_initial(rd, "pair.eta", cfg.eta);

    cfg.c0 = rd.number("analysis.c0", 0.5);
    if (!(cfg.c0 > 0.0 && cfg.c0 < 1.0))
        rd.errors.push_back("analysis.c0 must lie in (0, 1)");
    cfg.mu = rd.number("analysis.mu", 1.0);
    if (!(cfg.mu > 0.0)) rd.errors.push_back("analysis.mu must be positive");
    cfg.slack = rd.number("analysis.slack", 3.0);
    if (!(cfg.slack >= 0.0)) rd.errors.push_back("analysis.slack must be >= 0");
    cfg.probes = rd.positive_integer("analysis.probes", 1000);
    cfg.envelope = rd.text("analysis.envelope", "auto");
    if (cfg.envelope != "auto" && cfg.envelope != "finite" && cfg.envelope != "asymptotic")
        rd.errors.push_back(rd.where("analysis.envelope") +
                            "analysis.envelope must be auto, finite or asymptotic");
    cfg.extra_steps = rd.numbers("analysis.steps", {});
    cfg.order_steps = rd.numbers("analysis.order_steps", cfg.order_steps);
    for (double h : cfg.extra_steps)
        if (!(h > 0.0)) rd.errors.push_back("analysis.steps entries must be positive");
    for (double h : cfg.order_steps)
        if (!(h > 0.0)) rd.errors.push_back("analysis.order_steps entries must be positive");

    cfg.output_dir = rd.text("output.dir", ".");

    if (!rd.errors.empty()) throw ConfigError(std::move(rd.errors));
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({"cannot read config file " + path.string()});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace sddestab
