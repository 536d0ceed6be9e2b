#include "noma/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace noma {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_vector(std::ostream& os, const char* key, const std::vector<double>& v) {
    os << key;
    for (double x : v) os << ' ' << fmt_double(x);
    os << '\n';
}

}  // namespace

double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }
double watts_to_dbw(double watts) { return 10.0 * std::log10(watts); }

void Scenario::validate() const {
    if (num_users < 1 || num_subchannels < 1)
        throw std::invalid_argument("Scenario: need num_users >= 1 and num_subchannels >= 1");
    if (max_users_per_sc < 1)
        throw std::invalid_argument("Scenario: max_users_per_sc must be >= 1");
    if (gains.size() != static_cast<std::size_t>(num_users) * num_subchannels)
        throw std::invalid_argument("Scenario: gains size mismatch");
    if (noise.size() != static_cast<std::size_t>(num_subchannels))
        throw std::invalid_argument("Scenario: noise size mismatch");
    if (min_rates.size() != static_cast<std::size_t>(num_users))
        throw std::invalid_argument("Scenario: min_rates size mismatch");
    for (double g : gains)
        if (!(g > 0.0) || !std::isfinite(g))
            throw std::invalid_argument("Scenario: gains must be strictly positive and finite");
    for (double s : noise)
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("Scenario: noise must be strictly positive and finite");
    if (!(p_max_w > 0.0)) throw std::invalid_argument("Scenario: p_max_w must be > 0");
    if (p_c_w < 0.0) throw std::invalid_argument("Scenario: p_c_w must be >= 0");
    if (!(sinr_gap > 0.0) || sinr_gap > 1.0)
        throw std::invalid_argument("Scenario: sinr_gap must be in (0, 1]");
    if (ftpa_alpha > 0.0)
        throw std::invalid_argument("Scenario: ftpa_alpha must be <= 0");
    for (double r : min_rates)
        if (r < 0.0) throw std::invalid_argument("Scenario: min_rates must be >= 0");
}

std::string to_text(const Scenario& s) {
    std::ostringstream os;
    os << "num_users " << s.num_users << '\n';
    os << "num_subchannels " << s.num_subchannels << '\n';
    os << "max_users_per_sc " << s.max_users_per_sc << '\n';
    os << "p_max " << fmt_double(s.p_max_w) << '\n';
    os << "p_c " << fmt_double(s.p_c_w) << '\n';
    os << "sinr_gap " << fmt_double(s.sinr_gap) << '\n';
    os << "ftpa_alpha " << fmt_double(s.ftpa_alpha) << '\n';
    write_vector(os, "noise", s.noise);
    write_vector(os, "min_rates", s.min_rates);
    os << "gains\n";
    for (int m = 0; m < s.num_users; ++m) {
        for (int n = 0; n < s.num_subchannels; ++n) {
            if (n) os << ' ';
            os << fmt_double(s.gain(m, n));
        }
        os << '\n';
    }
    return os.str();
}

Scenario scenario_from_text(const std::string& text) {
    std::istringstream is(text);
    Scenario s;
    std::string key;
    bool saw_gains = false;
    while (is >> key) {
        if (key == "num_users") is >> s.num_users;
        else if (key == "num_subchannels") is >> s.num_subchannels;
        else if (key == "max_users_per_sc") is >> s.max_users_per_sc;
        else if (key == "p_max") is >> s.p_max_w;
        else if (key == "p_c") is >> s.p_c_w;
        else if (key == "sinr_gap") is >> s.sinr_gap;
        else if (key == "ftpa_alpha") is >> s.ftpa_alpha;
        else if (key == "noise") {
            s.noise.resize(s.num_subchannels);
            for (auto& x : s.noise) is >> x;
        } else if (key == "min_rates") {
            s.min_rates.resize(s.num_users);
            for (auto& x : s.min_rates) is >> x;
        } else if (key == "gains") {
            s.gains.resize(static_cast<std::size_t>(s.num_users) * s.num_subchannels);
            for (auto& x : s.gains) is >> x;
            saw_gains = true;
        } else {
            throw std::invalid_argument("scenario_from_text: unknown key '" + key + "'");
        }
        if (is.fail())
            throw std::invalid_argument("scenario_from_text: malformed value for key '" + key + "'");
    }
    if (!saw_gains) throw std::invalid_argument("scenario_from_text: missing gains block");
    s.validate();
    return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_scenario: cannot open " + path);
    os << to_text(s);
    if (!os) throw std::runtime_error("save_scenario: write failed for " + path);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_scenario: cannot open " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return scenario_from_text(buf.str());
}

}  // namespace noma
