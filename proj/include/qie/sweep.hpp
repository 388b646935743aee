#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qie/metrics.hpp"

namespace qie {

inline constexpr const char* kVersion = "1.0.0";

/// The full MetricsRow column set, in output order.
const std::vector<std::string>& metric_column_names();

struct TauGrid {
    double start = 0.1;
    double stop = 100.0;
    int count = 50;
    bool log_spacing = true;

    void validate() const;
    [[nodiscard]] std::vector<double> values() const;
};

/// One sweep: base parameters, a tau grid, zero or more parameter
/// overlays (each a "key=value,key=value" override set), the metric
/// columns to emit, and the quadrature policy.
struct SweepSpec {
    EngineParams params;
    TauGrid tau;
    std::vector<std::string> overlays; ///< empty means one run with base params
    std::vector<std::string> outputs;  ///< empty means all metric columns
    QuadratureConfig quad;

    void validate() const;
};

struct MetricsRow {
    int overlay_id = 0;
    CycleMetrics m;
};

/// Apply one "key=value,key=value" override set. Keys: T_S_K, T_M_K,
/// delta_E_meV, delta_E_rel.
EngineParams apply_overlay(const EngineParams& base, const std::string& overlay);

/// Evaluate every (overlay, tau) point. Points run concurrently (capped
/// by QIE_THREADS) but the returned order is always (overlay_id, tau).
std::vector<MetricsRow> run_sweep(const SweepSpec& spec);

/// '#'-preambled comma-separated table: metadata, header, rows. Undefined
/// entries carry the literal sentinel NA. Byte-identical for identical
/// inputs on one platform.
void write_sweep_csv(std::ostream& os, const SweepSpec& spec,
                     const std::vector<MetricsRow>& rows);

/// 12 significant digits, trailing zeros trimmed.
std::string format_number(double v);

/// One data row "overlay_id,tau,<cells...>" for the given columns; NA for
/// undefined entries.
std::string format_row(int overlay_id, const CycleMetrics& m,
                       const std::vector<std::string>& columns);

/// Partially-specified sweep inputs, as read from a config file or CLI
/// flags; merged with resolve_spec (flags override file, defaults fill
/// the rest).
struct SweepInputs {
    std::optional<double> T_S, T_M;
    std::optional<double> delta_E_meV, delta_E_rel;
    std::optional<double> tau_start, tau_stop;
    std::optional<int> tau_count;
    std::optional<bool> tau_log;
    std::optional<double> tol_abs, tol_rel;
    std::optional<std::string> out;
    std::vector<std::string> overlays;
    std::vector<std::string> outputs;
};

/// Parse a "key = value" config file with '#' comments. Unknown and
/// duplicate keys are errors with the offending line number.
SweepInputs parse_config(const std::string& path);

/// Layer CLI flags over file values over defaults.
SweepSpec resolve_spec(const SweepInputs& file, const SweepInputs& flags);

} // namespace qie
