#include "cbf/config.hpp"

#include <cmath>
#include <set>

#include "cbf/operators.hpp"

namespace cbf {

using nlohmann::json;

namespace {

SpectralField build_modes(const std::vector<ForcingMode>& modes, const Grid& grid) {
    SpectralField f(grid);
    const int half = grid.n() / 2;
    for (const ForcingMode& m : modes) {
        for (int j = 0; j < 3; ++j)
            if (std::abs(m.k[j]) >= half)
                throw ConfigError("forcing wavenumber outside the resolved lattice");
        const bool mean = m.k == Wavevector{0, 0, 0};
        const Wavevector neg{-m.k[0], -m.k[1], -m.k[2]};
        for (int c = 0; c < 3; ++c) {
            if (mean) {
                f.mode(c, m.k) += m.amplitude[c];
            } else {
                f.mode(c, m.k) += 0.5 * m.amplitude[c];
                f.mode(c, neg) += 0.5 * m.amplitude[c];
            }
        }
    }
    leray_project_in_place(f);
    return f;
}

}  // namespace

SpectralField Forcing::profile(const Grid& grid) const {
    if (kind == Kind::none) return SpectralField(grid);
    return build_modes(modes, grid);
}

SpectralField Forcing::offset_profile(const Grid& grid) const { return build_modes(offset, grid); }

SpectralField Forcing::evaluate(const Grid& grid, double t) const {
    SpectralField f = profile(grid);
    f *= time_factor(t);
    f += offset_profile(grid);
    return f;
}

double Forcing::time_factor(double t) const {
    return kind == Kind::time_harmonic ? std::cos(omega * t) : 1.0;
}

void SimulationConfig::validate() const {
    if (n < 4 || n % 2 != 0) throw ConfigError("n must be even and >= 4");
    if (!(mu > 0.0)) throw ConfigError("mu must be > 0");
    if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
    if (!(beta >= 0.0)) throw ConfigError("beta must be >= 0");
    if (!(r >= 1.0)) throw ConfigError("r must be >= 1");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be > 0");
    if (dt && !(*dt > 0.0)) throw ConfigError("dt must be > 0");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must be in (0, 1]");
    if (!(dt_max > 0.0)) throw ConfigError("dt_max must be > 0");
    if (record_every < 1) throw ConfigError("record_every must be >= 1");
    if (checkpoint_every < 0) throw ConfigError("checkpoint_every must be >= 0");
    if (!(blowup_h1 > 0.0)) throw ConfigError("blowup_h1 must be > 0");
    std::vector<ForcingMode> all = forcing.modes;
    all.insert(all.end(), forcing.offset.begin(), forcing.offset.end());
    for (const ForcingMode& m : all)
        for (int j = 0; j < 3; ++j)
            if (std::abs(m.k[j]) >= n / 2) throw ConfigError("forcing wavenumber not resolved");
    if (initial.kind == InitialCondition::Kind::random_divfree && initial.kcut < 1)
        throw ConfigError("random_divfree kcut must be >= 1");
    if (initial.kind == InitialCondition::Kind::single_mode)
        for (int j = 0; j < 3; ++j)
            if (std::abs(initial.k[j]) >= n / 2) throw ConfigError("initial mode not resolved");
}

std::vector<std::string> SimulationConfig::warnings() const {
    std::vector<std::string> w;
    if (r > 3.0)
        w.emplace_back("r > 3: global regularity is known; certificates are not needed");
    return w;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const char* where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j.items())
        if (!ok.count(key)) throw ConfigError(std::string("unknown key '") + key + "' in " + where);
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

Wavevector wavevector(const json& j) {
    if (!j.is_array() || j.size() != 3) throw ConfigError("wavevector must be [k0, k1, k2]");
    return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

Vec3 vec3(const json& j) {
    if (!j.is_array() || j.size() != 3) throw ConfigError("vector must have 3 entries");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Forcing forcing_from_json(const json& j) {
    reject_unknown(j, {"kind", "modes", "omega", "offset"}, "forcing");
    Forcing f;
    const std::string kind = get_or<std::string>(j, "kind", "none");
    if (kind == "none") f.kind = Forcing::Kind::none;
    else if (kind == "steady_modes") f.kind = Forcing::Kind::steady_modes;
    else if (kind == "time_harmonic") f.kind = Forcing::Kind::time_harmonic;
    else throw ConfigError("unknown forcing kind '" + kind + "'");
    f.omega = get_or(j, "omega", 0.0);
    if (j.contains("modes")) {
        for (const json& m : j.at("modes")) {
            reject_unknown(m, {"k", "amplitude"}, "forcing mode");
            f.modes.push_back({wavevector(m.at("k")), vec3(m.at("amplitude"))});
        }
    }
    if (j.contains("offset")) {
        for (const json& m : j.at("offset")) {
            reject_unknown(m, {"k", "amplitude"}, "forcing offset");
            f.offset.push_back({wavevector(m.at("k")), vec3(m.at("amplitude"))});
        }
    }
    return f;
}

InitialCondition initial_from_json(const json& j) {
    reject_unknown(j, {"kind", "amplitude", "seed", "slope", "kcut", "path", "k", "vector"},
                   "initial");
    InitialCondition ic;
    const std::string kind = get_or<std::string>(j, "kind", "taylor_green");
    if (kind == "taylor_green") ic.kind = InitialCondition::Kind::taylor_green;
    else if (kind == "random_divfree") ic.kind = InitialCondition::Kind::random_divfree;
    else if (kind == "checkpoint") ic.kind = InitialCondition::Kind::checkpoint;
    else if (kind == "single_mode") ic.kind = InitialCondition::Kind::single_mode;
    else throw ConfigError("unknown initial kind '" + kind + "'");
    ic.amplitude = get_or(j, "amplitude", ic.amplitude);
    ic.seed = get_or<std::uint64_t>(j, "seed", ic.seed);
    ic.slope = get_or(j, "slope", ic.slope);
    ic.kcut = get_or(j, "kcut", ic.kcut);
    ic.path = get_or<std::string>(j, "path", "");
    if (j.contains("k")) ic.k = wavevector(j.at("k"));
    if (j.contains("vector")) ic.vector = vec3(j.at("vector"));
    if (ic.kind == InitialCondition::Kind::checkpoint && ic.path.empty())
        throw ConfigError("checkpoint initial condition needs a path");
    return ic;
}

const char* forcing_kind_name(Forcing::Kind k) {
    switch (k) {
    case Forcing::Kind::none: return "none";
    case Forcing::Kind::steady_modes: return "steady_modes";
    case Forcing::Kind::time_harmonic: return "time_harmonic";
    }
    return "none";
}

const char* initial_kind_name(InitialCondition::Kind k) {
    switch (k) {
    case InitialCondition::Kind::taylor_green: return "taylor_green";
    case InitialCondition::Kind::random_divfree: return "random_divfree";
    case InitialCondition::Kind::checkpoint: return "checkpoint";
    case InitialCondition::Kind::single_mode: return "single_mode";
    }
    return "taylor_green";
}

}  // namespace

SimulationConfig config_from_json(const json& j) {
    reject_unknown(j,
                   {"n", "mu", "alpha", "beta", "r", "t_end", "dt", "cfl", "dt_max", "forcing",
                    "initial", "dealias", "record_every", "checkpoint_every", "tail_limit",
                    "blowup_h1"},
                   "simulation config");
    SimulationConfig c;
    c.n = get_or(j, "n", c.n);
    c.mu = get_or(j, "mu", c.mu);
    c.alpha = get_or(j, "alpha", c.alpha);
    c.beta = get_or(j, "beta", c.beta);
    c.r = get_or(j, "r", c.r);
    c.t_end = get_or(j, "t_end", c.t_end);
    if (j.contains("dt")) {
        const json& d = j.at("dt");
        if (d.is_string()) {
            if (d.get<std::string>() != "adaptive")
                throw ConfigError("dt must be a number or \"adaptive\"");
            c.dt.reset();
        } else if (d.is_number()) {
            c.dt = d.get<double>();
        } else {
            throw ConfigError("dt must be a number or \"adaptive\"");
        }
    }
    c.cfl = get_or(j, "cfl", c.cfl);
    c.dt_max = get_or(j, "dt_max", c.dt_max);
    if (j.contains("forcing")) c.forcing = forcing_from_json(j.at("forcing"));
    if (j.contains("initial")) c.initial = initial_from_json(j.at("initial"));
    c.dealias = get_or(j, "dealias", c.dealias);
    c.record_every = get_or(j, "record_every", c.record_every);
    c.checkpoint_every = get_or(j, "checkpoint_every", c.checkpoint_every);
    c.tail_limit = get_or(j, "tail_limit", c.tail_limit);
    c.blowup_h1 = get_or(j, "blowup_h1", c.blowup_h1);
    c.validate();
    return c;
}

json to_json(const SimulationConfig& c) {
    json j;
    j["n"] = c.n;
    j["mu"] = c.mu;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["r"] = c.r;
    j["t_end"] = c.t_end;
    j["dt"] = c.dt ? json(*c.dt) : json("adaptive");
    j["cfl"] = c.cfl;
    j["dt_max"] = c.dt_max;
    json f;
    f["kind"] = forcing_kind_name(c.forcing.kind);
    f["omega"] = c.forcing.omega;
    f["modes"] = json::array();
    for (const ForcingMode& m : c.forcing.modes)
        f["modes"].push_back({{"k", m.k}, {"amplitude", m.amplitude}});
    f["offset"] = json::array();
    for (const ForcingMode& m : c.forcing.offset)
        f["offset"].push_back({{"k", m.k}, {"amplitude", m.amplitude}});
    j["forcing"] = f;
    json ic;
    ic["kind"] = initial_kind_name(c.initial.kind);
    ic["amplitude"] = c.initial.amplitude;
    ic["seed"] = c.initial.seed;
    ic["slope"] = c.initial.slope;
    ic["kcut"] = c.initial.kcut;
    ic["path"] = c.initial.path.string();
    ic["k"] = c.initial.k;
    ic["vector"] = c.initial.vector;
    j["initial"] = ic;
    j["dealias"] = c.dealias;
    j["record_every"] = c.record_every;
    j["checkpoint_every"] = c.checkpoint_every;
    j["tail_limit"] = c.tail_limit;
    j["blowup_h1"] = c.blowup_h1;
    return j;
}

}  // namespace cbf
