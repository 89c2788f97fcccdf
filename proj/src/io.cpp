#include "squeeze/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace squeeze {

using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

cplx complex_of(const json& v, const std::string& key) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError("config: '" + key + "' must be [re, im]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

double real_of(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("config: '" + key + "' must be a number");
    return v.get<double>();
}

json pair(cplx z) { return json::array({z.real(), z.imag()}); }

const char* kHeader = "t,xi2,re_jp,im_jp,re_jp2,im_jp2,jpjm,jmjp,na,nb,theta_star";

void write_row(std::ostream& os, double t, double xi2, const MomentState& s, double theta) {
    const double v[] = {t, xi2, s.jp.real(), s.jp.imag(), s.jp2.real(), s.jp2.imag(), s.jpjm, s.jmjp, s.na, s.nb, theta};
    for (std::size_t i = 0; i < std::size(v); ++i) {
        if (i) os << ',';
        os << format_double(v[i]);
    }
}

}  // namespace

PhysicalParams params_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    PhysicalParams p;
    for (const auto& [key, v] : j.items()) {
        if (key == "omega1") p.omega1 = complex_of(v, key);
        else if (key == "omega2") p.omega2 = complex_of(v, key);
        else if (key == "omega3") p.omega3 = complex_of(v, key);
        else if (key == "omega4") p.omega4 = complex_of(v, key);
        else if (key == "g_a") p.g_a = complex_of(v, key);
        else if (key == "g_b") p.g_b = complex_of(v, key);
        else if (key == "delta1") p.delta1 = real_of(v, key);
        else if (key == "delta2") p.delta2 = real_of(v, key);
        else if (key == "delta") p.delta = real_of(v, key);
        else if (key == "gamma_a") p.gamma_a = real_of(v, key);
        else if (key == "gamma_b") p.gamma_b = real_of(v, key);
        else if (key == "gamma_o") p.gamma_o = real_of(v, key);
        else if (key == "kappa") p.kappa = real_of(v, key);
        else if (key == "omega_b") p.omega_b = real_of(v, key);
        else if (key == "n_atoms") {
            if (!v.is_number_integer()) throw ConfigError("config: 'n_atoms' must be an integer");
            p.n_atoms = v.get<long long>();
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    return p;
}

json to_json(const PhysicalParams& p) {
    return {{"omega1", pair(p.omega1)}, {"omega2", pair(p.omega2)}, {"omega3", pair(p.omega3)},
            {"omega4", pair(p.omega4)}, {"g_a", pair(p.g_a)},       {"g_b", pair(p.g_b)},
            {"delta1", p.delta1},       {"delta2", p.delta2},       {"delta", p.delta},
            {"gamma_a", p.gamma_a},     {"gamma_b", p.gamma_b},     {"gamma_o", p.gamma_o},
            {"kappa", p.kappa},         {"n_atoms", p.n_atoms},     {"omega_b", p.omega_b}};
}

json to_json(const ValidityReport& v) {
    return {{"threshold", v.threshold},
            {"cavity_shift_margin", v.cavity_shift_margin},
            {"adiabatic_margin", v.adiabatic_margin},
            {"weak_drive_margin", v.weak_drive_margin},
            {"max_drive_ratio", v.max_drive_ratio},
            {"cavity_shift_ok", v.cavity_shift_ok},
            {"adiabatic_ok", v.adiabatic_ok},
            {"weak_drive_ok", v.weak_drive_ok},
            {"cooperativity", v.cooperativity},
            {"collective_cooperativity", v.collective_cooperativity}};
}

json to_json(const OptResult& r) {
    return {{"objective", r.objective}, {"t", r.t},
            {"delta", r.delta},         {"ratio", pair(r.ratio)},
            {"phi_in", r.phi_in},       {"phi_out", r.phi_out},
            {"evaluations", r.evaluations}, {"converged", r.converged},
            {"breakdown", r.breakdown}, {"validity", to_json(r.validity)},
            {"params", to_json(r.params)}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    os << kHeader << '\n';
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        write_row(os, tr.times[i], tr.xi2[i], tr.states[i], tr.theta_star[i]);
        os << '\n';
    }
}

void write_exact_csv(std::ostream& os, const std::vector<double>& times, const std::vector<MomentState>& moments,
                     long long n_atoms, const std::string& solver) {
    os << kHeader << ",solver\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        const MomentState& s = moments[i];
        const bool planar = s.jz() > 0.0;
        const double xi2 = planar ? squeezing_parameter(s, n_atoms) : std::nan("");
        write_row(os, times[i], xi2, s, min_variance_angle(s));
        os << ',' << solver << '\n';
    }
}

}  // namespace squeeze
