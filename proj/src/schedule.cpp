#include "apch/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace apch {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("schedule field '" + key + "': bad number '" + s + "'");
    }
}

} // namespace

bool CriticalValueSchedule::affine() const { return std::isfinite(C) && std::isfinite(D); }

double CriticalValueSchedule::z_at_length(std::size_t m) const {
    if (affine()) return C + D * std::log(static_cast<double>(m));
    for (std::size_t i = 0; i < lengths.size(); ++i)
        if (lengths[i] == m) return z[i];
    throw std::invalid_argument("schedule has no critical value for interval length " +
                                std::to_string(m));
}

void CriticalValueSchedule::refresh_values() {
    if (!affine()) return;
    z.resize(lengths.size());
    for (std::size_t i = 0; i < lengths.size(); ++i)
        z[i] = C + D * std::log(static_cast<double>(lengths[i]));
}

std::string serialize_schedule(const CriticalValueSchedule& cv) {
    std::ostringstream os;
    os << "format apch-schedule-v1\n";
    os << "family " << cv.family << "\n";
    os << "theta0 " << fmt_double(cv.theta0.omega) << " " << fmt_double(cv.theta0.alpha) << " "
       << fmt_double(cv.theta0.beta) << "\n";
    os << "r " << fmt_double(cv.r) << "\n";
    os << "rho " << fmt_double(cv.rho) << "\n";
    os << "m0 " << cv.m0 << "\n";
    os << "a " << fmt_double(cv.a) << "\n";
    os << "mc_reps " << cv.mc_reps << "\n";
    os << "seed " << cv.seed << "\n";
    os << "lengths";
    for (std::size_t m : cv.lengths) os << " " << m;
    os << "\n";
    if (cv.affine()) {
        os << "C " << fmt_double(cv.C) << "\n";
        os << "D " << fmt_double(cv.D) << "\n";
        os << "# z(m) = C + D log m:";
        for (std::size_t i = 0; i < cv.lengths.size(); ++i) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), " %.3f", cv.C + cv.D * std::log((double)cv.lengths[i]));
            os << buf;
        }
        os << "\n";
    } else {
        os << "z";
        for (double v : cv.z) os << " " << fmt_double(v);
        os << "\n";
    }
    for (const std::string& s : cv.sources) os << "source " << s << "\n";
    return os.str();
}

CriticalValueSchedule parse_schedule(std::istream& in) {
    CriticalValueSchedule cv;
    bool saw_format = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        std::string rest;
        std::getline(ls, rest);
        if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);

        if (key == "format") {
            if (rest != "apch-schedule-v1")
                throw std::invalid_argument("unsupported schedule format: " + rest);
            saw_format = true;
        } else if (key == "family") {
            cv.family = rest;
        } else if (key == "theta0") {
            std::istringstream vs(rest);
            std::string w, a, b;
            if (!(vs >> w >> a >> b)) throw std::invalid_argument("schedule theta0: need 3 values");
            cv.theta0 = ParamVector{parse_double(w, "theta0"), parse_double(a, "theta0"),
                                    parse_double(b, "theta0")};
        } else if (key == "r") {
            cv.r = parse_double(rest, key);
        } else if (key == "rho") {
            cv.rho = parse_double(rest, key);
        } else if (key == "m0") {
            cv.m0 = static_cast<std::size_t>(std::stoull(rest));
        } else if (key == "a") {
            cv.a = parse_double(rest, key);
        } else if (key == "mc_reps") {
            cv.mc_reps = static_cast<std::size_t>(std::stoull(rest));
        } else if (key == "seed") {
            cv.seed = std::stoull(rest);
        } else if (key == "lengths") {
            std::istringstream vs(rest);
            std::size_t m;
            while (vs >> m) cv.lengths.push_back(m);
        } else if (key == "C") {
            cv.C = parse_double(rest, key);
        } else if (key == "D") {
            cv.D = parse_double(rest, key);
        } else if (key == "z") {
            std::istringstream vs(rest);
            std::string tok;
            while (vs >> tok) cv.z.push_back(parse_double(tok, key));
        } else if (key == "source") {
            cv.sources.push_back(rest);
        } else {
            throw std::invalid_argument("unknown schedule key: " + key);
        }
    }
    if (!saw_format) throw std::invalid_argument("missing schedule format line");
    if (cv.lengths.empty()) throw std::invalid_argument("schedule has no grid lengths");
    if (cv.affine()) {
        cv.refresh_values();
    } else if (cv.z.size() != cv.lengths.size()) {
        throw std::invalid_argument("schedule z count does not match grid lengths");
    }
    return cv;
}

CriticalValueSchedule parse_schedule_string(const std::string& text) {
    std::istringstream is(text);
    return parse_schedule(is);
}

void save_schedule(const std::string& path, const CriticalValueSchedule& cv) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open schedule file for writing: " + path);
    out << serialize_schedule(cv);
}

CriticalValueSchedule load_schedule(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open schedule file: " + path);
    return parse_schedule(in);
}

CriticalValueSchedule conservative_schedule(const std::vector<CriticalValueSchedule>& schedules) {
    if (schedules.empty())
        throw std::invalid_argument("conservative_schedule: empty input set");
    if (schedules.size() == 1) return schedules.front();

    const CriticalValueSchedule& first = schedules.front();
    for (const CriticalValueSchedule& s : schedules) {
        if (s.lengths != first.lengths)
            throw std::invalid_argument("conservative_schedule: grids differ");
        if (s.r != first.r || s.rho != first.rho)
            throw std::invalid_argument("conservative_schedule: (r, rho) differ");
        if (s.family != first.family)
            throw std::invalid_argument("conservative_schedule: families differ");
    }

    CriticalValueSchedule out;
    out.lengths = first.lengths;
    out.family = first.family;
    out.r = first.r;
    out.rho = first.rho;
    out.m0 = first.m0;
    out.a = first.a;
    out.z.assign(out.lengths.size(), -std::numeric_limits<double>::infinity());
    for (const CriticalValueSchedule& s : schedules) {
        for (std::size_t i = 0; i < out.lengths.size(); ++i)
            out.z[i] = std::max(out.z[i], s.z_at_length(out.lengths[i]));
        out.sources.push_back("theta0=" + to_string(s.theta0) + " seed=" + std::to_string(s.seed));
    }
    return out;
}

} // namespace apch
