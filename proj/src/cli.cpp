#include "escdim/cli.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "escdim/counting.hpp"
#include "escdim/mcmullen.hpp"
#include "escdim/orbits.hpp"
#include "escdim/schedule.hpp"

namespace escdim {

namespace {

// Single source of truth for the key catalog: the parser, the serializer and
// therefore the round-trip guarantee all walk this list. Keys are visited in
// byte order so the echoed block is sorted.
template <class Cfg, class F>
void visit_keys(Cfg& c, F&& f) {
    f("A1", c.A1);
    f("A2", c.A2);
    f("A3", c.A3);
    f("A4", c.A4);
    f("A5", c.A5);
    f("C1", c.C1);
    f("C2", c.C2);
    f("C3", c.C3);
    f("C4", c.C4);
    f("C5", c.C5);
    f("C6", c.C6);
    f("C7", c.C7);
    f("C8", c.C8);
    f("C9", c.C9);
    f("R", c.R);
    f("branch", c.branch);
    f("cover", c.cover);
    f("cover_file", c.cover_file);
    f("depth", c.depth);
    f("levels", c.levels);
    f("lift_order", c.lift_order);
    f("model", c.model);
    f("offset_im", c.offset_im);
    f("offset_re", c.offset_re);
    f("out", c.out);
    f("per_decade", c.per_decade);
    f("proximity_q", c.proximity_q);
    f("r_hi", c.r_hi);
    f("r_lo", c.r_lo);
    f("resolution", c.resolution);
    f("rho", c.rho);
    f("schedule_base", c.schedule_base);
    f("truncation", c.truncation);
    f("w1_im", c.w1_im);
    f("w1_re", c.w1_re);
    f("w2_im", c.w2_im);
    f("w2_re", c.w2_re);
    f("with_proximity", c.with_proximity);
    f("x_max", c.x_max);
    f("x_min", c.x_min);
    f("y_max", c.y_max);
    f("y_min", c.y_min);
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }
std::string fmt(const std::string& v) { return v; }

void assign(const std::string& v, const char* key, double& slot) {
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size())
        throw ConfigError(std::string("bad number for ") + key + ": '" + v + "'");
    if (!std::isfinite(x))
        throw ConfigError(std::string("non-finite value for ") + key + ": '" + v + "'");
    slot = x;
}

void assign(const std::string& v, const char* key, int& slot) {
    char* end = nullptr;
    long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size())
        throw ConfigError(std::string("bad integer for ") + key + ": '" + v + "'");
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw ConfigError(std::string("integer out of range for ") + key + ": '" + v + "'");
    slot = int(x);
}

void assign(const std::string& v, const char* key, bool& slot) {
    if (v == "true") slot = true;
    else if (v == "false") slot = false;
    else throw ConfigError(std::string("bad boolean for ") + key + ": '" + v + "' (use true/false)");
}

void assign(const std::string& v, const char*, std::string& slot) { slot = v; }

void validate(const RunConfig& c) {
    auto positive = [](double v, const char* k) {
        if (!(v > 0.0))
            throw ConfigError(std::string("constant must be positive: ") + k + " = " + fmt(v));
    };
    positive(c.A1, "A1"); positive(c.A2, "A2"); positive(c.A3, "A3");
    positive(c.A4, "A4"); positive(c.A5, "A5");
    positive(c.C1, "C1"); positive(c.C2, "C2"); positive(c.C3, "C3");
    positive(c.C4, "C4"); positive(c.C5, "C5"); positive(c.C6, "C6");
    positive(c.C7, "C7"); positive(c.C8, "C8"); positive(c.C9, "C9");
    positive(c.R, "R");
    positive(c.rho, "rho");
    positive(c.r_lo, "r_lo");
    positive(c.r_hi, "r_hi");
    positive(c.schedule_base, "schedule_base");

    static const std::set<std::string> models = {
        "plain-wp", "wp-exp", "wp-cosh", "wp-power", "power-lift"};
    if (!models.count(c.model)) throw ConfigError("unknown model: " + c.model);
    if (c.branch != "plus" && c.branch != "minus")
        throw ConfigError("unknown branch: " + c.branch);
    static const std::set<std::string> covers = {"paper", "wpexp", "escalating", "file"};
    if (!covers.count(c.cover)) throw ConfigError("unknown cover: " + c.cover);
    if (c.cover == "file" && c.cover_file.empty())
        throw ConfigError("cover = file requires cover_file");

    if (c.truncation < 4) throw ConfigError("truncation must be >= 4");
    if (c.lift_order < 2) throw ConfigError("lift_order must be >= 2");
    if (c.per_decade < 1) throw ConfigError("per_decade must be >= 1");
    if (c.proximity_q < 4) throw ConfigError("proximity_q must be >= 4");
    if (c.levels < 2) throw ConfigError("levels must be >= 2");
    if (c.resolution < 16) throw ConfigError("resolution must be >= 16");
    if (c.depth < 1) throw ConfigError("depth must be >= 1");
    if (!(c.x_min < c.x_max) || !(c.y_min < c.y_max))
        throw ConfigError("degenerate grid rectangle");
    if (c.out.empty()) throw ConfigError("out must not be empty");
}

void write_counting_csv(const std::string& path,
                        const std::vector<CountingSample>& samples) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("unwritable path: " + path);
    os << "r,n,N,m,T\n";
    for (const auto& s : samples)
        os << fmt(s.r) << ',' << fmt(s.n) << ',' << fmt(s.N) << ','
           << fmt(s.m) << ',' << fmt(s.T) << '\n';
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + path);
}

void write_cover_csv(const std::string& path, const NestedCoverSpec& spec,
                     const BoundSequence& bs) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("unwritable path: " + path);
    os << "level,delta,diam,bound\n";
    for (size_t i = 0; i < bs.beta.size(); ++i)
        os << (i + 1) << ',' << fmt(std::exp(spec.log_delta[i])) << ','
           << fmt(std::exp(spec.log_diam[i])) << ',' << fmt(bs.beta[i]) << '\n';
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + path);
}

NestedCoverSpec read_cover_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read cover file: " + path);
    NestedCoverSpec spec;
    std::string line;
    while (std::getline(is, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream ls(t);
        double delta = 0.0, diam = 0.0;
        std::string extra;
        if (!(ls >> delta >> diam) || (ls >> extra))
            throw std::runtime_error("bad cover row: '" + t + "' (want: delta diam)");
        if (!(delta > 0.0) || !(diam > 0.0))
            throw std::runtime_error("cover entries must be positive: '" + t + "'");
        spec.log_delta.push_back(std::log(delta));
        spec.log_diam.push_back(std::log(diam));
    }
    return spec;
}

std::array<unsigned char, 3> pixel_color(const PixelRecord& p, int cap) {
    switch (p.cls) {
        case OrbitClass::bounded: return {0, 0, 0};
        case OrbitClass::prepole: return {255, 255, 255};
        case OrbitClass::undetermined: return {64, 64, 200};
        default: {
            double t = cap > 0 ? double(p.depth) / double(cap) : 1.0;
            t = std::min(std::max(t, 0.0), 1.0);
            return {255, static_cast<unsigned char>(std::lround(215.0 * (1.0 - t))), 0};
        }
    }
}

void write_ppm(const std::string& path, const EscapeField& f, int cap) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("unwritable path: " + path);
    os << "P6\n" << f.resolution << ' ' << f.resolution << "\n255\n";
    for (int iy = f.resolution - 1; iy >= 0; --iy)  // image rows run top-down
        for (int ix = 0; ix < f.resolution; ++ix) {
            auto rgb = pixel_color(f.at(ix, iy), cap);
            os.put(char(rgb[0]));
            os.put(char(rgb[1]));
            os.put(char(rgb[2]));
        }
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + path);
}

void write_points_csv(const std::string& path, const EscapeField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("unwritable path: " + path);
    os << "x,y,depth\n";
    for (int iy = 0; iy < f.resolution; ++iy)
        for (int ix = 0; ix < f.resolution; ++ix) {
            const PixelRecord& p = f.at(ix, iy);
            if (p.cls != OrbitClass::escaping) continue;
            cd z = f.region.cell_center(ix, iy);
            os << fmt(z.real()) << ',' << fmt(z.imag()) << ',' << p.depth << '\n';
        }
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value: '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key: '" + t + "'");
        bool matched = false;
        visit_keys(cfg, [&](const char* name, auto& slot) {
            if (matched || key != name) return;
            matched = true;
            assign(value, name, slot);
        });
        if (!matched) throw ConfigError("unknown key: " + key);
        if (!seen.insert(key).second) throw ConfigError("duplicate key: " + key);
    }
    validate(cfg);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os << "# effective config\n";
    visit_keys(c, [&](const char* name, const auto& slot) {
        os << name << " = " << fmt(slot) << '\n';
    });
    return os.str();
}

std::unique_ptr<ModelFunction> build_model(const RunConfig& c) {
    Lattice lat(cd(c.w1_re, c.w1_im), cd(c.w2_re, c.w2_im));
    cd off(c.offset_re, c.offset_im);
    if (c.model == "plain-wp")
        return std::make_unique<PlainWp>(lat, c.truncation);
    if (c.model == "wp-exp")
        return std::make_unique<WpExp>(lat, off, c.truncation);
    if (c.model == "wp-cosh")
        return std::make_unique<WpCosh>(lat, c.truncation);
    if (c.model == "wp-power")
        return std::make_unique<WpPower>(
            lat, c.rho, off, c.branch == "minus" ? Branch::minus : Branch::plus,
            c.truncation);
    if (c.model == "power-lift")
        return std::make_unique<PowerLift>(
            std::make_shared<PlainWp>(lat, c.truncation), c.lift_order);
    throw ConfigError("unknown model: " + c.model);
}

int cmd_counting(const RunConfig& c, std::ostream& log) {
    log << serialize_config(c);
    try {
        validate(c);
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return 2;
    }
    if (!(c.r_lo < c.r_hi)) {
        log << "error: empty radius window [" << fmt(c.r_lo) << ", "
            << fmt(c.r_hi) << "]\n";
        return 2;
    }
    std::vector<CountingSample> samples;
    try {
        auto m = build_model(c);
        samples = make_counting_samples(*m, c.r_lo, c.r_hi, c.per_decade,
                                        c.proximity_q, c.with_proximity);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }
    OrderEstimate est;
    try {
        est = estimate_order(samples, c.r_lo, c.r_hi);
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << '\n';
        return 2;
    }
    const std::string path = c.out + ".csv";
    try {
        write_counting_csv(path, samples);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }
    log << "counting: model " << c.model << ", " << samples.size()
        << " samples\n";
    log << "order estimate: slope " << fmt(est.slope) << " intercept "
        << fmt(est.intercept) << " rms " << fmt(est.rms) << " window ["
        << fmt(est.r_lo) << ", " << fmt(est.r_hi) << "] samples " << est.count
        << '\n';
    log << "wrote " << path << '\n';
    return 0;
}

int cmd_dim_bound(const RunConfig& c, std::ostream& log) {
    log << serialize_config(c);
    try {
        validate(c);
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return 2;
    }
    const std::string path = c.out + ".csv";
    try {
        NestedCoverSpec spec;
        double target = 0.0;
        if (c.cover == "paper") {
            spec = paper_cover_spec(c.rho, c.R, c.C2, c.C7, c.levels);
            target = dimension_formula(c.rho);
        } else if (c.cover == "wpexp") {
            spec = wpexp_cover_spec(c.R, c.A4, c.A5, c.levels);
            target = 2.0;  // infinite-order family
        } else if (c.cover == "escalating") {
            spec = escalating_cover_spec(c.rho, c.C8, c.C9, c.levels);
            target = dimension_formula(c.rho);
        } else {
            spec = read_cover_file(c.cover_file);
            target = dimension_formula(c.rho);
        }
        BoundSequence bs = mcmullen_bound(spec);
        write_cover_csv(path, spec, bs);
        log << "dimension bound: limit " << fmt(bs.limit) << " target "
            << fmt(target) << " levels " << spec.log_delta.size()
            << " last_diff " << fmt(bs.last_diff) << '\n';
        log << "wrote " << path << '\n';
        return 0;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_render(const RunConfig& c, std::ostream& log) {
    log << serialize_config(c);
    try {
        validate(c);
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return 2;
    }
    try {
        auto m = build_model(c);
        PlanarRegion region(c.x_min, c.x_max, c.y_min, c.y_max);
        const double base = c.schedule_base;
        EscapeSchedule sched = [base](int k) { return std::pow(base, double(k)); };
        EscapeField field = render_escape_field(*m, region, c.resolution, sched,
                                                c.depth);
        long long counts[4] = {0, 0, 0, 0};
        for (const auto& p : field.pixels) ++counts[int(p.cls)];
        const std::string ppm = c.out + ".ppm";
        const std::string csv = c.out + ".csv";
        write_ppm(ppm, field, c.depth);
        write_points_csv(csv, field);
        log << "render: " << field.resolution << 'x' << field.resolution
            << " bounded " << counts[int(OrbitClass::bounded)] << " prepole "
            << counts[int(OrbitClass::prepole)] << " escaping "
            << counts[int(OrbitClass::escaping)] << " undetermined "
            << counts[int(OrbitClass::undetermined)] << '\n';
        log << "wrote " << ppm << '\n';
        log << "wrote " << csv << '\n';
        return 0;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace escdim
