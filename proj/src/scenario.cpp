#include "rstop/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "rstop/errors.hpp"

namespace rstop {

std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

double round12(double x) {
    return std::strtod(fmt12(x).c_str(), nullptr);
}

const char* family_name(Family f) {
    switch (f) {
        case Family::Ellsberg: return "ellsberg";
        case Family::Test: return "test";
        case Family::General: return "general";
    }
    return "unknown";
}

EllsbergParams Scenario::ellsberg() const {
    if (family != Family::Ellsberg)
        throw std::logic_error("scenario is not of the ellsberg family");
    return EllsbergParams::make(alpha, eps, c, sigma);
}

Problem Scenario::problem() const {
    switch (family) {
        case Family::Ellsberg:
            return ellsberg().problem();
        case Family::Test:
            return Problem{ModelParams::make(0.0, beta, sigma, c),
                           PriorInterval::make(m_lo, m_hi),
                           Payoffs::make(a + b, b, a, a + b, u2)};
        case Family::General:
            return Problem{ModelParams::make(theta0, theta1, sigma, c),
                           PriorInterval::make(m_lo, m_hi),
                           Payoffs::make(u00, u01, u10, u11, u2)};
    }
    throw std::logic_error("unknown scenario family");
}

namespace {

struct RawValue {
    std::string text;
    bool quoted = false;
    int line = 0;
};

using Section = std::map<std::string, RawValue>;

[[noreturn]] void fail(int line, const std::string& msg) {
    throw scenario_error("scenario line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// strip a trailing comment, honoring quoted strings
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        else if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

struct RawScenario {
    Section problem;
    Section sim;
    bool has_sim = false;
};

RawScenario tokenize(const std::string& text) {
    RawScenario raw;
    Section* cur = nullptr;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(lineno, "malformed section header");
            std::string name = trim(s.substr(1, s.size() - 2));
            if (name == "problem") cur = &raw.problem;
            else if (name == "sim") {
                cur = &raw.sim;
                raw.has_sim = true;
            } else fail(lineno, "unknown section [" + name + "]");
            continue;
        }
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) fail(lineno, "expected key = value");
        if (cur == nullptr) fail(lineno, "key outside of a section");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) fail(lineno, "empty key");
        if (val.empty()) fail(lineno, "empty value for '" + key + "'");
        RawValue rv;
        rv.line = lineno;
        if (val.front() == '"') {
            if (val.size() < 2 || val.back() != '"')
                fail(lineno, "unterminated string for '" + key + "'");
            rv.text = val.substr(1, val.size() - 2);
            rv.quoted = true;
        } else {
            rv.text = val;
        }
        if (!cur->emplace(key, rv).second)
            fail(lineno, "duplicate key '" + key + "'");
    }
    return raw;
}

class SectionReader {
public:
    SectionReader(Section& sec, std::string name)
        : sec_(sec), name_(std::move(name)) {}

    bool has(const std::string& key) const { return sec_.count(key) > 0; }

    double number(const std::string& key) {
        const RawValue& rv = take(key);
        if (rv.quoted) fail(rv.line, "'" + key + "' must be a number");
        const char* begin = rv.text.c_str();
        char* end = nullptr;
        double x = std::strtod(begin, &end);
        if (end != begin + rv.text.size())
            fail(rv.line, "'" + key + "': not a number: " + rv.text);
        return x;
    }

    double number_or(const std::string& key, double dflt) {
        return has(key) ? number(key) : dflt;
    }

    std::uint64_t integer(const std::string& key, std::uint64_t dflt) {
        if (!has(key)) return dflt;
        const RawValue& rv = take(key);
        if (rv.quoted || rv.text.empty() ||
            rv.text.find_first_not_of("0123456789") != std::string::npos)
            fail(rv.line, "'" + key + "' must be a nonnegative integer");
        return std::strtoull(rv.text.c_str(), nullptr, 10);
    }

    std::string word(const std::string& key) {
        const RawValue& rv = take(key);
        if (!rv.quoted) fail(rv.line, "'" + key + "' must be a quoted string");
        return rv.text;
    }

    std::string word_or(const std::string& key, const std::string& dflt) {
        return has(key) ? word(key) : dflt;
    }

    void finish() {
        for (const auto& [key, rv] : sec_)
            if (!used_.count(key))
                fail(rv.line, "unknown key '" + key + "' in [" + name_ + "]");
    }

private:
    const RawValue& take(const std::string& key) {
        auto it = sec_.find(key);
        if (it == sec_.end())
            throw scenario_error("scenario: missing required key '" + key +
                                 "' in [" + name_ + "]");
        used_[key] = true;
        return it->second;
    }

    Section& sec_;
    std::string name_;
    std::map<std::string, bool> used_;
};

} // namespace

Scenario parse_scenario(const std::string& text) {
    RawScenario raw = tokenize(text);
    if (raw.problem.empty())
        throw scenario_error("scenario: missing [problem] section");

    Scenario s;
    SectionReader prob(raw.problem, "problem");
    std::string fam = prob.word("family");
    if (fam == "ellsberg") {
        s.family = Family::Ellsberg;
        s.alpha = prob.number("alpha");
        s.eps = prob.number("eps");
        s.c = prob.number("c");
        s.sigma = prob.number("sigma");
    } else if (fam == "test") {
        s.family = Family::Test;
        s.beta = prob.number("beta");
        s.a = prob.number("a");
        s.b = prob.number("b");
        s.m_lo = prob.number("m_lo");
        s.m_hi = prob.number("m_hi");
        s.c = prob.number("c");
        s.sigma = prob.number("sigma");
        s.u2 = prob.number_or("u2", 0.0);
    } else if (fam == "general") {
        s.family = Family::General;
        s.theta0 = prob.number("theta0");
        s.theta1 = prob.number("theta1");
        s.sigma = prob.number("sigma");
        s.c = prob.number("c");
        s.u00 = prob.number("u00");
        s.u01 = prob.number("u01");
        s.u10 = prob.number("u10");
        s.u11 = prob.number("u11");
        s.u2 = prob.number("u2");
        s.m_lo = prob.number("m_lo");
        s.m_hi = prob.number("m_hi");
    } else {
        throw scenario_error("scenario: unknown family '" + fam + "'");
    }
    prob.finish();

    SectionReader sim(raw.sim, "sim");
    std::string measure = sim.word_or("measure", "true_theta");
    if (measure == "true_theta") s.sim.measure.kind = MeasureKind::TrueTheta;
    else if (measure == "worst_case") s.sim.measure.kind = MeasureKind::WorstCase;
    else throw scenario_error("scenario: unknown measure '" + measure + "'");
    s.sim.measure.theta = sim.number_or("theta", 0.0);
    s.sim.dt = sim.number_or("dt", 1e-3);
    s.sim.t_max = sim.number_or("t_max", 0.0);
    s.sim.n_paths = sim.integer("n_paths", 10000);
    s.sim.seed = sim.integer("seed", 1);
    sim.finish();

    if (!(s.sim.dt > 0.0) || !std::isfinite(s.sim.dt))
        throw scenario_error("scenario: dt must be positive");
    if (s.sim.t_max < 0.0 || !std::isfinite(s.sim.t_max))
        throw scenario_error("scenario: t_max must be nonnegative");
    if (s.sim.n_paths == 0)
        throw scenario_error("scenario: n_paths must be at least 1");
    if (!std::isfinite(s.sim.measure.theta))
        throw scenario_error("scenario: theta must be finite");

    // surface value-domain problems at load time
    try {
        (void)s.problem();
    } catch (const std::domain_error& e) {
        throw scenario_error(std::string("scenario: invalid problem: ") +
                             e.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw scenario_error("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    auto kv = [&out](const char* key, const std::string& val) {
        out << key << " = " << val << "\n";
    };
    auto num = [&](const char* key, double x) { kv(key, fmt12(x)); };

    out << "[problem]\n";
    kv("family", std::string("\"") + family_name(s.family) + "\"");
    switch (s.family) {
        case Family::Ellsberg:
            num("alpha", s.alpha);
            num("eps", s.eps);
            num("c", s.c);
            num("sigma", s.sigma);
            break;
        case Family::Test:
            num("beta", s.beta);
            num("a", s.a);
            num("b", s.b);
            num("m_lo", s.m_lo);
            num("m_hi", s.m_hi);
            num("c", s.c);
            num("sigma", s.sigma);
            num("u2", s.u2);
            break;
        case Family::General:
            num("theta0", s.theta0);
            num("theta1", s.theta1);
            num("sigma", s.sigma);
            num("c", s.c);
            num("u00", s.u00);
            num("u01", s.u01);
            num("u10", s.u10);
            num("u11", s.u11);
            num("u2", s.u2);
            num("m_lo", s.m_lo);
            num("m_hi", s.m_hi);
            break;
    }
    out << "[sim]\n";
    kv("measure", std::string("\"") + measure_name(s.sim.measure.kind) + "\"");
    num("theta", s.sim.measure.theta);
    num("dt", s.sim.dt);
    num("t_max", s.sim.t_max);
    kv("n_paths", std::to_string(s.sim.n_paths));
    kv("seed", std::to_string(s.sim.seed));
    return out.str();
}

} // namespace rstop
