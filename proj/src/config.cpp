#include "hhlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "hhlab/error.hpp"

namespace hhlab {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line, const std::string& key)
{
    double x = 0.0;
    const char* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end) throw ParseError(line, "value of " + key + " is not a number: '" + v + "'");
    return x;
}

long long to_int(const std::string& v, int line, const std::string& key)
{
    long long x = 0;
    const char* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end) throw ParseError(line, "value of " + key + " is not an integer: '" + v + "'");
    return x;
}

std::vector<std::string> split_list(const std::string& v)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

// "re" or "re:im"
cplx to_complex(const std::string& v, int line, const std::string& key)
{
    const auto colon = v.find(':');
    if (colon == std::string::npos) return {to_double(v, line, key), 0.0};
    return {to_double(trim(v.substr(0, colon)), line, key), to_double(trim(v.substr(colon + 1)), line, key)};
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

const std::vector<std::pair<std::string, Setter>>& setters()
{
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"grid.nx", [](RunConfig& c, const std::string& v, int l) { c.grid.nx = int(to_int(v, l, "grid.nx")); }},
        {"grid.ny", [](RunConfig& c, const std::string& v, int l) { c.grid.ny = int(to_int(v, l, "grid.ny")); }},
        {"grid.rank", [](RunConfig& c, const std::string& v, int l) { c.grid.rank = int(to_int(v, l, "grid.rank")); }},
        {"grid.epsilon", [](RunConfig& c, const std::string& v, int l) { c.grid.epsilon = to_double(v, l, "grid.epsilon"); }},
        {"grid.cutoff_scale",
         [](RunConfig& c, const std::string& v, int l) { c.grid.cutoff_scale = to_double(v, l, "grid.cutoff_scale"); }},
        {"abelian.mu_re",
         [](RunConfig& c, const std::string& v, int l) { c.abelian.mu.real(to_double(v, l, "abelian.mu_re")); }},
        {"abelian.mu_im",
         [](RunConfig& c, const std::string& v, int l) { c.abelian.mu.imag(to_double(v, l, "abelian.mu_im")); }},
        {"abelian.nu_re",
         [](RunConfig& c, const std::string& v, int l) { c.abelian.nu.real(to_double(v, l, "abelian.nu_re")); }},
        {"abelian.nu_im",
         [](RunConfig& c, const std::string& v, int l) { c.abelian.nu.imag(to_double(v, l, "abelian.nu_im")); }},
        {"abelian.alpha",
         [](RunConfig& c, const std::string& v, int l) { c.abelian.alpha = to_double(v, l, "abelian.alpha"); }},
        {"sweep.alpha_max",
         [](RunConfig& c, const std::string& v, int l) { c.sweep_alpha_max = to_double(v, l, "sweep.alpha_max"); }},
        {"sweep.steps", [](RunConfig& c, const std::string& v, int l) { c.sweep_steps = int(to_int(v, l, "sweep.steps")); }},
        {"newton.tol", [](RunConfig& c, const std::string& v, int l) { c.newton.tol_residual = to_double(v, l, "newton.tol"); }},
        {"newton.max_iter",
         [](RunConfig& c, const std::string& v, int l) { c.newton.max_iter = int(to_int(v, l, "newton.max_iter")); }},
        {"newton.backtrack",
         [](RunConfig& c, const std::string& v, int l) { c.newton.backtrack = to_double(v, l, "newton.backtrack"); }},
        {"newton.max_halvings",
         [](RunConfig& c, const std::string& v, int l) { c.newton.max_halvings = int(to_int(v, l, "newton.max_halvings")); }},
        {"newton.shift",
         [](RunConfig& c, const std::string& v, int l) { c.newton.relative_shift = to_double(v, l, "newton.shift"); }},
        {"newton.sweeps",
         [](RunConfig& c, const std::string& v, int l) { c.newton.sweeps = int(to_int(v, l, "newton.sweeps")); }},
        {"lax.lambdas",
         [](RunConfig& c, const std::string& v, int l) {
             c.lambdas.clear();
             for (const std::string& s : split_list(v)) c.lambdas.push_back(to_complex(s, l, "lax.lambdas"));
         }},
        {"lax.sections",
         [](RunConfig& c, const std::string& v, int l) { c.lax_sections = int(to_int(v, l, "lax.sections")); }},
        {"lax.refine_ny",
         [](RunConfig& c, const std::string& v, int l) {
             c.lax_refine_ny.clear();
             for (const std::string& s : split_list(v)) c.lax_refine_ny.push_back(int(to_int(s, l, "lax.refine_ny")));
         }},
        {"lax.refine_nx", [](RunConfig& c, const std::string& v, int l) { c.lax_refine_nx = int(to_int(v, l, "lax.refine_nx")); }},
        {"cokernel.nx", [](RunConfig& c, const std::string& v, int l) { c.cokernel_nx = int(to_int(v, l, "cokernel.nx")); }},
        {"cokernel.ny", [](RunConfig& c, const std::string& v, int l) { c.cokernel_ny = int(to_int(v, l, "cokernel.ny")); }},
        {"run.experiment", [](RunConfig& c, const std::string& v, int) { c.experiment = v; }},
        {"run.out", [](RunConfig& c, const std::string& v, int) { c.out_dir = v; }},
        {"run.seed",
         [](RunConfig& c, const std::string& v, int l) {
             const long long s = to_int(v, l, "run.seed");
             if (s < 0) throw ParseError(l, "run.seed must be non-negative");
             c.seed = std::uint64_t(s);
         }},
    };
    return table;
}

void require(bool ok, const std::string& key, const std::string& what)
{
    if (!ok) throw ValidationError(key, what);
}

} // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, fn] : setters()) k.push_back(name);
        return k;
    }();
    return keys;
}

std::vector<double> RunConfig::sweep_alphas() const
{
    std::vector<double> a;
    for (int k = 0; k <= sweep_steps; ++k) a.push_back(sweep_alpha_max * k / sweep_steps);
    return a;
}

void RunConfig::validate() const
{
    grid.validate();
    newton.validate();
    require(std::isfinite(abelian.mu.real()) && std::isfinite(abelian.mu.imag()), "abelian.mu_re",
            "abelian.mu must be finite");
    require(std::isfinite(abelian.nu.real()) && std::isfinite(abelian.nu.imag()), "abelian.nu_re",
            "abelian.nu must be finite");
    require(std::isfinite(abelian.alpha), "abelian.alpha", "abelian.alpha must be finite");
    require(std::isfinite(sweep_alpha_max) && sweep_alpha_max > 0.0, "sweep.alpha_max",
            "sweep.alpha_max must be positive and finite");
    require(sweep_steps >= 1, "sweep.steps", "sweep.steps must be at least 1");
    require(!lambdas.empty(), "lax.lambdas", "lax.lambdas must list at least one value");
    for (const cplx l : lambdas) require(std::abs(l) >= 1e-8, "lax.lambdas", "lax.lambdas entries must satisfy |lambda| >= 1e-8");
    require(lax_sections >= 3, "lax.sections", "lax.sections must be at least 3");
    require(lax_refine_ny.size() >= 2, "lax.refine_ny", "lax.refine_ny must list at least two grids");
    for (std::size_t k = 0; k < lax_refine_ny.size(); ++k) {
        require(lax_refine_ny[k] >= 17 && lax_refine_ny[k] % 2 == 1, "lax.refine_ny",
                "lax.refine_ny entries must be odd and ≥ 17");
        require(k == 0 || lax_refine_ny[k] == 2 * lax_refine_ny[k - 1] - 1, "lax.refine_ny",
                "lax.refine_ny must halve the y spacing at each step");
    }
    CylinderGrid lg = grid;
    lg.nx = lax_refine_nx;
    lg.ny = lax_refine_ny.front();
    try {
        lg.validate();
    } catch (const ValidationError& e) {
        throw ValidationError("lax.refine_nx", std::string("refinement grid: ") + e.what());
    }
    CylinderGrid ck = grid;
    ck.nx = cokernel_nx;
    ck.ny = cokernel_ny;
    try {
        ck.validate();
    } catch (const ValidationError& e) {
        throw ValidationError("cokernel.nx", std::string("cokernel grid: ") + e.what());
    }
    require(!experiment.empty(), "run.experiment", "run.experiment must not be empty");
}

RunConfig parse_config(const std::string& text)
{
    RunConfig cfg;
    std::set<std::string> seen;
    std::stringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected key=value, got '" + body + "'");
        const std::string key = trim(body.substr(0, eq)), value = trim(body.substr(eq + 1));
        if (key.empty()) throw ParseError(line, "missing key before '='");
        if (value.empty()) throw ParseError(line, "missing value for " + key);
        const auto& table = setters();
        const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
        if (it == table.end()) throw ParseError(line, "unknown key " + key);
        if (!seen.insert(key).second) throw ParseError(line, "duplicate key " + key);
        it->second(cfg, value, line);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ArgumentError("cannot open config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

} // namespace hhlab
