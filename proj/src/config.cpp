#include "nehari/config.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "nehari/spectral.hpp"
#include "vendor_json.hpp"

namespace nehari {

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
    bool consumed = false;
};

using RawMap = std::map<std::string, RawEntry>;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_double_list(const std::string& s, bool& ok) {
    std::vector<double> out;
    ok = true;
    std::string tok;
    std::istringstream is(s);
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0') {
            ok = false;
            return out;
        }
        out.push_back(v);
    }
    if (out.empty()) ok = false;
    return out;
}

class Reader {
public:
    Reader(RawMap& raw, std::vector<ConfigError>& errors) : raw_(raw), errors_(errors) {}

    bool has(const std::string& key) const { return raw_.count(key) > 0; }

    void get_int(const std::string& key, int& dst) {
        auto* e = take(key);
        if (!e) return;
        char* end = nullptr;
        long v = std::strtol(e->value.c_str(), &end, 10);
        if (end == e->value.c_str() || *end != '\0')
            fail(e->line, key + ": expected an integer, got '" + e->value + "'");
        else
            dst = static_cast<int>(v);
    }

    void get_longlong(const std::string& key, long long& dst) {
        auto* e = take(key);
        if (!e) return;
        char* end = nullptr;
        long long v = std::strtoll(e->value.c_str(), &end, 10);
        if (end == e->value.c_str() || *end != '\0')
            fail(e->line, key + ": expected an integer, got '" + e->value + "'");
        else
            dst = v;
    }

    void get_double(const std::string& key, double& dst) {
        auto* e = take(key);
        if (!e) return;
        char* end = nullptr;
        double v = std::strtod(e->value.c_str(), &end);
        if (end == e->value.c_str() || *end != '\0')
            fail(e->line, key + ": expected a number, got '" + e->value + "'");
        else
            dst = v;
    }

    void get_bool(const std::string& key, bool& dst) {
        auto* e = take(key);
        if (!e) return;
        if (e->value == "true" || e->value == "1")
            dst = true;
        else if (e->value == "false" || e->value == "0")
            dst = false;
        else
            fail(e->line, key + ": expected true/false, got '" + e->value + "'");
    }

    void get_bool_tristate(const std::string& key, int& dst) {
        bool b = false;
        auto* probe = find(key);
        if (!probe) return;
        get_bool(key, b);
        dst = b ? 1 : 0;
    }

    void get_string(const std::string& key, std::string& dst) {
        auto* e = take(key);
        if (!e) return;
        dst = e->value;
    }

    void get_list(const std::string& key, std::vector<double>& dst) {
        auto* e = take(key);
        if (!e) return;
        bool ok = false;
        auto v = parse_double_list(e->value, ok);
        if (!ok)
            fail(e->line, key + ": expected a comma-separated number list, got '" + e->value + "'");
        else
            dst = std::move(v);
    }

    int line_of(const std::string& key) const {
        auto it = raw_.find(key);
        return it == raw_.end() ? 0 : it->second.line;
    }

    void fail(int line, const std::string& msg) { errors_.push_back({line, msg}); }

private:
    RawEntry* find(const std::string& key) {
        auto it = raw_.find(key);
        return it == raw_.end() ? nullptr : &it->second;
    }
    RawEntry* take(const std::string& key) {
        auto* e = find(key);
        if (e) e->consumed = true;
        return e;
    }

    RawMap& raw_;
    std::vector<ConfigError>& errors_;
};

} // namespace

bool try_parse_config(const std::string& text, const std::vector<std::string>& overrides,
                      RunConfig& out, std::vector<ConfigError>& errors) {
    RawMap raw;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) {
            errors.push_back({lineno, "expected 'key = value', got '" + s + "'"});
            continue;
        }
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) {
            errors.push_back({lineno, "missing key before '='"});
            continue;
        }
        if (raw.count(key)) {
            errors.push_back({lineno, "duplicate key '" + key + "'"});
            continue;
        }
        raw[key] = {val, lineno, false};
    }
    for (const auto& ov : overrides) {
        std::size_t eq = ov.find('=');
        if (eq == std::string::npos) {
            errors.push_back({-1, "override must be key=value, got '" + ov + "'"});
            continue;
        }
        std::string key = trim(ov.substr(0, eq));
        std::string val = trim(ov.substr(eq + 1));
        raw[key] = {val, -1, false}; // overrides replace file entries
    }

    RunConfig cfg;
    Reader rd(raw, errors);

    // domain / grid
    rd.get_int("ell", cfg.ell);
    {
        std::string cs;
        rd.get_string("cross_section", cs);
        if (!cs.empty()) {
            std::istringstream css(cs);
            std::string kind;
            css >> kind;
            std::vector<double> params;
            double v;
            while (css >> v) params.push_back(v);
            bool kind_ok = true;
            if (kind == "interval")
                cfg.cross_kind = CrossKind::interval;
            else if (kind == "disk")
                cfg.cross_kind = CrossKind::disk;
            else if (kind == "square")
                cfg.cross_kind = CrossKind::square;
            else {
                kind_ok = false;
                rd.fail(rd.line_of("cross_section"),
                        "cross_section: unknown kind '" + kind +
                            "' (expected interval|disk|square)");
            }
            if (kind_ok) {
                if (params.empty())
                    rd.fail(rd.line_of("cross_section"),
                            "cross_section: missing size parameters");
                else
                    cfg.cross_params = params;
            }
        }
    }
    {
        std::string fam;
        rd.get_string("family", fam);
        if (!fam.empty()) {
            if (fam == "straight")
                cfg.family = Family::straight;
            else if (fam == "bump")
                cfg.family = Family::bump_hprime;
            else if (fam == "pinched")
                cfg.family = Family::pinched_h0;
            else if (fam == "ball")
                cfg.family = Family::ball;
            else
                rd.fail(rd.line_of("family"),
                        "family: expected straight|bump|pinched|ball, got '" + fam + "'");
        }
    }
    rd.get_double("m", cfg.m);
    rd.get_double("a0", cfg.a0);
    rd.get_double("a1", cfg.a1);
    rd.get_double("T", cfg.T);
    rd.get_double("h", cfg.h);
    rd.get_longlong("max_points", cfg.max_points);

    // problem
    rd.get_int("N", cfg.N);
    rd.get_double("p", cfg.p);
    rd.get_double("q", cfg.q);
    rd.get_double("mu", cfg.mu);
    rd.get_double("lambda", cfg.lambda);

    // solver
    rd.get_int("max_iters", cfg.solver.max_iters);
    rd.get_double("step0", cfg.solver.step0);
    rd.get_double("armijo_factor", cfg.solver.armijo_factor);
    rd.get_double("armijo_slope", cfg.solver.armijo_slope);
    rd.get_double("tol_residual", cfg.solver.tol_residual);
    rd.get_double("cg_tol", cfg.solver.cg_tol);
    {
        std::string init;
        rd.get_string("init", init);
        if (!init.empty()) {
            if (init == "auto")
                cfg.solver.init = InitKind::auto_select;
            else if (init == "eigen_bump")
                cfg.solver.init = InitKind::eigen_bump;
            else if (init == "bump")
                cfg.solver.init = InitKind::bump;
            else if (init == "instanton")
                cfg.solver.init = InitKind::instanton;
            else if (init == "two_bump")
                cfg.solver.init = InitKind::two_bump;
            else if (init == "file")
                cfg.solver.init = InitKind::file;
            else
                rd.fail(rd.line_of("init"),
                        "init: expected auto|eigen_bump|bump|instanton|two_bump|file");
        }
    }
    rd.get_string("init_file", cfg.solver.init_file);
    rd.get_double("init_eps", cfg.solver.init_eps);
    rd.get_double("nodal_offset", cfg.solver.nodal_offset);
    rd.get_bool("polish", cfg.solver.polish);
    rd.get_int("seed", cfg.seed);

    // gap
    rd.get_list("eps_list", cfg.eps_list);
    rd.get_list("R_list", cfg.R_list);
    rd.get_int("tau_grid", cfg.tau_grid);
    rd.get_double("M", cfg.gap_M);
    rd.get_double("gap_center", cfg.gap_center);

    // decay
    rd.get_double("window_R1", cfg.window_R1);
    rd.get_double("window_R2", cfg.window_R2);
    rd.get_bool_tristate("with_prefactor", cfg.with_prefactor);
    rd.get_double("eta", cfg.eta);
    rd.get_string("decay_field", cfg.decay_field);

    // eigen / shoot / instanton
    rd.get_list("eigen_h_list", cfg.eigen_h_list);
    rd.get_double("R_ball", cfg.R_ball);
    rd.get_double("instanton_eps", cfg.instanton_eps);
    rd.get_double("instanton_h", cfg.instanton_h);
    rd.get_list("instanton_boxes", cfg.instanton_boxes);

    // unknown keys
    for (const auto& [key, entry] : raw)
        if (!entry.consumed)
            errors.push_back({entry.line, "unknown key '" + key + "'"});

    // ---- validation -------------------------------------------------------
    auto vfail = [&](const std::string& key, const std::string& msg) {
        errors.push_back({rd.line_of(key), msg});
    };

    if (cfg.ell < 1 || cfg.ell > 2) vfail("ell", "ell must be 1 or 2");
    int cross_dim = 0;
    try {
        CrossSection cs = cfg.cross_section();
        cross_dim = cs.dim();
    } catch (const Error& e) {
        vfail("cross_section", std::string("cross_section: ") + e.what());
    }
    if (cross_dim > 0) {
        int derivedN = cfg.ell + cross_dim;
        if (cfg.N == 0)
            cfg.N = derivedN;
        else if (cfg.N != derivedN)
            vfail("N", "N = " + std::to_string(cfg.N) + " contradicts ell + cross dim = " +
                           std::to_string(derivedN));
    }
    if (cfg.p == 0.0) {
        if (cfg.N >= 3)
            cfg.p = ProblemParams::critical_exponent(cfg.N);
        else
            vfail("p", "p must be given explicitly when N < 3 (no critical exponent)");
    }
    if (cfg.q == 0.0 && cfg.p > 0.0) cfg.q = 0.5 * (cfg.p + 2.0);
    if (cfg.p > 0.0 && cfg.q > 0.0 && !(2.0 < cfg.q && cfg.q < cfg.p))
        vfail("q", "require 2 < q < p (q = " + std::to_string(cfg.q) +
                       ", p = " + std::to_string(cfg.p) + ")");
    if (!(cfg.mu > 0.0)) vfail("mu", "require mu > 0");
    if (!(cfg.h > 0.0)) vfail("h", "require h > 0");
    if (cfg.family == Family::bump_hprime || cfg.family == Family::pinched_h0) {
        if (!rd.has("m")) vfail("family", "family = bump/pinched requires key 'm'");
        if (!rd.has("a0")) vfail("family", "family = bump/pinched requires key 'a0'");
        if (rd.has("m") && !(cfg.m > 0.0)) vfail("m", "require m > 0");
        if (rd.has("a0") && !(cfg.a0 > 0.0)) vfail("a0", "require a0 > 0");
    }
    if (cfg.a1 == 0.0) cfg.a1 = cfg.a0 / 2.0;
    if (cfg.T < 0.0) vfail("T", "require T >= 0 (0 = auto)");
    if (cfg.solver.max_iters < 1) vfail("max_iters", "require max_iters >= 1");
    if (!(cfg.solver.step0 > 0.0)) vfail("step0", "require step0 > 0");
    if (!(cfg.solver.tol_residual > 0.0)) vfail("tol_residual", "require tol_residual > 0");
    if (!(cfg.solver.cg_tol > 0.0)) vfail("cg_tol", "require cg_tol > 0");
    if (cfg.solver.init == InitKind::file && cfg.solver.init_file.empty())
        vfail("init", "init = file requires init_file");
    if (cfg.window_R1 < 0.0 || cfg.window_R2 < 0.0)
        vfail("window_R1", "decay window bounds must be nonnegative");

    if (!errors.empty()) return false;
    out = std::move(cfg);
    return true;
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    RunConfig cfg;
    std::vector<ConfigError> errors;
    if (try_parse_config(text, overrides, cfg, errors)) return cfg;
    std::ostringstream os;
    os << "config errors:";
    for (const auto& e : errors) {
        os << "\n  ";
        if (e.line > 0)
            os << "line " << e.line << ": ";
        else if (e.line == -1)
            os << "override: ";
        os << e.message;
    }
    throw Error(ErrorCode::parse_error, os.str());
}

CrossSection RunConfig::cross_section() const {
    int dim = (cross_kind == CrossKind::interval) ? 1 : (N > 0 ? N - ell : 2);
    // For disk/square the dimension comes from N - ell when N was given,
    // otherwise the conventional 2.
    if (cross_kind == CrossKind::disk || cross_kind == CrossKind::square) {
        if (N > 0)
            dim = N - ell;
        else
            dim = 2;
        if (dim < 1 || dim > 2)
            throw Error(ErrorCode::invalid_geometry, "cross-section dim must be 1 or 2");
    }
    return make_cross_section(cross_kind, cross_params, dim);
}

double RunConfig::resolved_T() const {
    if (T > 0.0) return T;
    if (family == Family::ball) return cross_section().bounding_radius();
    // Default: exp(-sqrt(lambda1) T) < 1e-6, via the coarse-grid lambda1.
    Eigenpair ep = principal_eigenpair(cross_section(), h, 1e-6);
    double t = -std::log(1e-6) / std::sqrt(ep.lambda1);
    return std::ceil(t / h) * h;
}

DomainSpec RunConfig::domain() const {
    return make_domain(ell, cross_section(), family, resolved_T(), m, a0, a1);
}

ProblemParams RunConfig::problem() const {
    ProblemParams pp;
    pp.N = N;
    pp.ell = ell;
    pp.p = p;
    pp.q = q;
    pp.mu = mu;
    pp.lambda = lambda;
    pp.validate();
    return pp;
}

std::string RunConfig::to_json_object() const {
    nlohmann::json j;
    j["ell"] = ell;
    {
        std::ostringstream cs;
        cs << cross_kind_name(cross_kind);
        for (double v : cross_params) cs << " " << v;
        j["cross_section"] = cs.str();
    }
    j["family"] = family_name(family);
    j["m"] = m;
    j["a0"] = a0;
    j["a1"] = a1;
    j["T"] = T;
    j["h"] = h;
    j["max_points"] = max_points;
    j["N"] = N;
    j["p"] = p;
    j["q"] = q;
    j["mu"] = mu;
    j["lambda"] = lambda;
    j["max_iters"] = solver.max_iters;
    j["step0"] = solver.step0;
    j["armijo_factor"] = solver.armijo_factor;
    j["armijo_slope"] = solver.armijo_slope;
    j["tol_residual"] = solver.tol_residual;
    j["cg_tol"] = solver.cg_tol;
    const char* init = "auto";
    switch (solver.init) {
        case InitKind::auto_select: init = "auto"; break;
        case InitKind::eigen_bump: init = "eigen_bump"; break;
        case InitKind::bump: init = "bump"; break;
        case InitKind::instanton: init = "instanton"; break;
        case InitKind::two_bump: init = "two_bump"; break;
        case InitKind::file: init = "file"; break;
    }
    j["init"] = init;
    j["init_file"] = solver.init_file;
    j["init_eps"] = solver.init_eps;
    j["nodal_offset"] = solver.nodal_offset;
    j["polish"] = solver.polish;
    j["seed"] = seed;
    j["eps_list"] = eps_list;
    j["R_list"] = R_list;
    j["tau_grid"] = tau_grid;
    j["M"] = gap_M;
    j["gap_center"] = gap_center;
    j["window_R1"] = window_R1;
    j["window_R2"] = window_R2;
    j["with_prefactor"] = with_prefactor;
    j["eta"] = eta;
    j["decay_field"] = decay_field;
    j["eigen_h_list"] = eigen_h_list;
    j["R_ball"] = R_ball;
    j["instanton_eps"] = instanton_eps;
    j["instanton_h"] = instanton_h;
    j["instanton_boxes"] = instanton_boxes;
    return j.dump();
}

} // namespace nehari
