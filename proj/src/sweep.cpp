#include "qie/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace qie {

const std::vector<std::string>& metric_column_names() {
    static const std::vector<std::string> names = {
        "I_nats", "W_meas_meV", "W_erg_meV", "W_th_meV", "W_tot_meV",
        "TS_I_meV", "Y", "eta_erg", "eta_max", "Pi_tilde"};
    return names;
}

void TauGrid::validate() const {
    if (count < 2) throw InvalidInput("tau grid: count must be >= 2");
    if (!(start < stop)) throw InvalidInput("tau grid: start must be < stop");
    if (start < 0.0) throw InvalidInput("tau grid: start must be >= 0");
    if (log_spacing && !(start > 0.0))
        throw InvalidInput("tau grid: start must be > 0 with log spacing");
}

std::vector<double> TauGrid::values() const {
    validate();
    std::vector<double> v(static_cast<std::size_t>(count));
    const double n1 = static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / n1;
        v[static_cast<std::size_t>(i)] =
            log_spacing ? start * std::pow(stop / start, f) : start + f * (stop - start);
    }
    v.back() = stop;
    return v;
}

void SweepSpec::validate() const {
    params.validate();
    tau.validate();
    quad.validate();
    for (const auto& name : outputs) {
        const auto& all = metric_column_names();
        if (std::find(all.begin(), all.end(), name) == all.end())
            throw InvalidInput("sweep outputs: unknown metric name '" + name + "'");
    }
    for (const auto& ov : overlays) (void)apply_overlay(params, ov);
}

EngineParams apply_overlay(const EngineParams& base, const std::string& overlay) {
    EngineParams p = base;
    std::optional<double> rel;
    std::stringstream ss(overlay);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("overlay: expected key=value, got '" + item + "'");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(item.substr(0, eq));
        const std::string val = trim(item.substr(eq + 1));
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(val, &used);
        } catch (const std::exception&) {
            throw InvalidInput("overlay: bad number '" + val + "' for key '" + key + "'");
        }
        if (used != val.size())
            throw InvalidInput("overlay: bad number '" + val + "' for key '" + key + "'");
        if (key == "T_S_K")
            p.T_S = x;
        else if (key == "T_M_K")
            p.T_M = x;
        else if (key == "delta_E_meV")
            p.delta_E = x;
        else if (key == "delta_E_rel")
            rel = x;
        else
            throw InvalidInput("overlay: unknown key '" + key + "'");
    }
    if (rel) p.delta_E = *rel * k_boltzmann * p.T_S;
    p.validate();
    return p;
}

namespace {

unsigned thread_budget(std::size_t n_tasks) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("QIE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return static_cast<unsigned>(std::min<std::size_t>(hw, n_tasks));
}

} // namespace

std::vector<MetricsRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    const auto taus = spec.tau.values();
    const std::size_t n_overlays = spec.overlays.empty() ? 1 : spec.overlays.size();
    const std::size_t n_tasks = n_overlays * taus.size();

    std::vector<EngineParams> params_by_overlay;
    for (std::size_t o = 0; o < n_overlays; ++o)
        params_by_overlay.push_back(
            spec.overlays.empty() ? spec.params : apply_overlay(spec.params, spec.overlays[o]));

    std::vector<MetricsRow> rows(n_tasks);
    std::vector<std::exception_ptr> errors(n_tasks);
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_tasks) return;
            const std::size_t o = i / taus.size();
            const std::size_t t = i % taus.size();
            try {
                rows[i].overlay_id = static_cast<int>(o);
                rows[i].m = evaluate_cycle(params_by_overlay[o], taus[t], spec.quad);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const unsigned nthreads = thread_budget(n_tasks);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned k = 0; k < nthreads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::string cell(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string("NA");
}

std::optional<double> metric_value(const CycleMetrics& m, const std::string& name) {
    if (name == "I_nats") return m.I_nats;
    if (name == "W_meas_meV") return m.W_meas;
    if (name == "W_erg_meV") return m.W_erg;
    if (name == "W_th_meV") return m.W_th;
    if (name == "W_tot_meV") return m.W_tot;
    if (name == "TS_I_meV") return m.TS_I;
    if (name == "Y") return m.Y;
    if (name == "eta_erg") return m.eta_erg;
    if (name == "eta_max") return m.eta_max;
    if (name == "Pi_tilde") return m.Pi_tilde;
    throw InvalidInput("unknown metric column '" + name + "'");
}

} // namespace

std::string format_row(int overlay_id, const CycleMetrics& m,
                       const std::vector<std::string>& columns) {
    std::string line = std::to_string(overlay_id) + "," + format_number(m.tau);
    for (const auto& c : columns) {
        line += ",";
        line += cell(metric_value(m, c));
    }
    return line;
}

void write_sweep_csv(std::ostream& os, const SweepSpec& spec,
                     const std::vector<MetricsRow>& rows) {
    const auto& columns = spec.outputs.empty() ? metric_column_names() : spec.outputs;

    os << "# qie sweep v" << kVersion << "\n";
    os << "# T_S_K = " << format_number(spec.params.T_S) << "\n";
    os << "# T_M_K = " << format_number(spec.params.T_M) << "\n";
    os << "# delta_E_meV = " << format_number(spec.params.delta_E) << "\n";
    os << "# k_B_meV_per_K = " << format_number(k_boltzmann) << "\n";
    os << "# kB_theta_meV = " << format_number(kB_theta) << "\n";
    os << "# tau_start = " << format_number(spec.tau.start) << "\n";
    os << "# tau_stop = " << format_number(spec.tau.stop) << "\n";
    os << "# tau_count = " << spec.tau.count << "\n";
    os << "# tau_log = " << (spec.tau.log_spacing ? "true" : "false") << "\n";
    os << "# tol_abs = " << format_number(spec.quad.abs_tol) << "\n";
    os << "# tol_rel = " << format_number(spec.quad.rel_tol) << "\n";
    os << "# window_sigmas = " << format_number(spec.quad.window_sigmas) << "\n";
    os << "# max_subdivisions = " << spec.quad.max_subdivisions << "\n";
    os << "# tau is g*t_m/sqrt(k_B*Theta); Pi_tilde*(g*sqrt(k_B*Theta)) is physical power\n";
    if (!spec.outputs.empty()) {
        os << "# outputs =";
        for (std::size_t i = 0; i < spec.outputs.size(); ++i)
            os << (i ? "," : " ") << spec.outputs[i];
        os << "\n";
    }
    for (std::size_t o = 0; o < spec.overlays.size(); ++o)
        os << "# overlay_" << o << " = " << spec.overlays[o] << "\n";

    os << "overlay_id,tau";
    for (const auto& c : columns) os << "," << c;
    os << "\n";

    for (const auto& row : rows) os << format_row(row.overlay_id, row.m, columns) << "\n";
}

namespace {

bool parse_bool(const std::string& v, const std::string& key, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw InvalidInput("config line " + std::to_string(line) + ": key '" + key +
                       "' expects true/false, got '" + v + "'");
}

double parse_double(const std::string& v, const std::string& key, int line) {
    std::size_t used = 0;
    try {
        const double x = std::stod(v, &used);
        if (used == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw InvalidInput("config line " + std::to_string(line) + ": key '" + key +
                       "' expects a number, got '" + v + "'");
}

int parse_int(const std::string& v, const std::string& key, int line) {
    std::size_t used = 0;
    try {
        const int x = std::stoi(v, &used);
        if (used == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw InvalidInput("config line " + std::to_string(line) + ": key '" + key +
                       "' expects an integer, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

} // namespace

SweepInputs parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("config not found: " + path);

    SweepInputs cfg;
    std::map<std::string, int> seen;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (const auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = s.find_last_not_of(" \t\r");
        s = s.substr(b, e - b + 1);

        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("config line " + std::to_string(line) +
                               ": expected key = value, got '" + s + "'");
        auto trim = [](std::string t) {
            const auto tb = t.find_first_not_of(" \t");
            const auto te = t.find_last_not_of(" \t");
            return tb == std::string::npos ? std::string{} : t.substr(tb, te - tb + 1);
        };
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty())
            throw InvalidInput("config line " + std::to_string(line) + ": empty key");

        if (const auto it = seen.find(key); it != seen.end())
            throw InvalidInput("config line " + std::to_string(line) + ": duplicate key '" +
                               key + "' (first seen on line " + std::to_string(it->second) + ")");
        seen[key] = line;

        if (key == "T_S_K")
            cfg.T_S = parse_double(val, key, line);
        else if (key == "T_M_K")
            cfg.T_M = parse_double(val, key, line);
        else if (key == "delta_E_meV")
            cfg.delta_E_meV = parse_double(val, key, line);
        else if (key == "delta_E_rel")
            cfg.delta_E_rel = parse_double(val, key, line);
        else if (key == "tau_start")
            cfg.tau_start = parse_double(val, key, line);
        else if (key == "tau_stop")
            cfg.tau_stop = parse_double(val, key, line);
        else if (key == "tau_count")
            cfg.tau_count = parse_int(val, key, line);
        else if (key == "tau_log")
            cfg.tau_log = parse_bool(val, key, line);
        else if (key == "tol_abs")
            cfg.tol_abs = parse_double(val, key, line);
        else if (key == "tol_rel")
            cfg.tol_rel = parse_double(val, key, line);
        else if (key == "out")
            cfg.out = val;
        else if (key == "outputs")
            cfg.outputs = split_list(val, ',');
        else if (key == "overlays")
            cfg.overlays = split_list(val, ';');
        else
            throw InvalidInput("config line " + std::to_string(line) + ": unknown key '" +
                               key + "'");
    }
    return cfg;
}

SweepSpec resolve_spec(const SweepInputs& file, const SweepInputs& flags) {
    auto pick = [](const auto& hi, const auto& lo) { return hi ? hi : lo; };

    SweepSpec spec;
    spec.params.T_S = pick(flags.T_S, file.T_S).value_or(300.0);
    spec.params.T_M = pick(flags.T_M, file.T_M).value_or(300.0);

    // Temperatures are checked before delta_E is derived from them; the
    // diagnostic must name the field the caller set.
    if (!(spec.params.T_S > 0.0) || !std::isfinite(spec.params.T_S))
        throw InvalidInput("T_S must be > 0 (got " + format_number(spec.params.T_S) + " K)");
    if (!(spec.params.T_M > 0.0) || !std::isfinite(spec.params.T_M))
        throw InvalidInput("T_M must be > 0 (got " + format_number(spec.params.T_M) + " K)");

    if (flags.delta_E_meV && flags.delta_E_rel)
        throw InvalidInput("give either --delta-E or --delta-E-rel, not both");
    if (file.delta_E_meV && file.delta_E_rel)
        throw InvalidInput("config sets both delta_E_meV and delta_E_rel");
    if (flags.delta_E_meV)
        spec.params.delta_E = *flags.delta_E_meV;
    else if (flags.delta_E_rel)
        spec.params.delta_E = *flags.delta_E_rel * k_boltzmann * spec.params.T_S;
    else if (file.delta_E_meV)
        spec.params.delta_E = *file.delta_E_meV;
    else
        spec.params.delta_E = file.delta_E_rel.value_or(1.0) * k_boltzmann * spec.params.T_S;

    spec.tau.start = pick(flags.tau_start, file.tau_start).value_or(0.1);
    spec.tau.stop = pick(flags.tau_stop, file.tau_stop).value_or(100.0);
    spec.tau.count = pick(flags.tau_count, file.tau_count).value_or(50);
    spec.tau.log_spacing = pick(flags.tau_log, file.tau_log).value_or(true);

    spec.quad.abs_tol = pick(flags.tol_abs, file.tol_abs).value_or(spec.quad.abs_tol);
    spec.quad.rel_tol = pick(flags.tol_rel, file.tol_rel).value_or(spec.quad.rel_tol);

    spec.overlays = flags.overlays.empty() ? file.overlays : flags.overlays;
    spec.outputs = flags.outputs.empty() ? file.outputs : flags.outputs;

    spec.validate();
    return spec;
}

} // namespace qie
