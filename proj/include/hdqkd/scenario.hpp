#pragma once

#include "hdqkd/bases.hpp"
#include "hdqkd/keyrate.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hdqkd {

enum class ScenarioMode { Analytic, MonteCarlo, PaperData };

ScenarioMode scenario_mode_from_string(const std::string& s);
std::string to_string(ScenarioMode m);
PhaseFlavor flavor_from_string(const std::string& s);
std::string to_string(PhaseFlavor f);

/// A full run request: the isotropic model evaluated at each noise fraction
/// in p_list, either analytically, by Monte Carlo counts, or replayed from
/// an ingested dataset.
struct Scenario {
    int d = 8;
    int k = 8;
    std::vector<double> p_list;
    PhaseFlavor flavor = PhaseFlavor::ComplexFourier;
    double pair_rate = 4000.0;  // clean coincidences/s
    double duration = 1.0;      // seconds, Monte Carlo mode
    std::uint64_t seed = 1;
    ScenarioMode mode = ScenarioMode::Analytic;
    std::string data_dir;       // dataset directory, replay mode

    void validate() const;  // throws std::invalid_argument naming the field
    static Scenario from_json_text(const std::string& text);
    std::string to_json_text() const;
};

struct ScenarioResult {
    double p = 0.0;
    double noise = 0.0;  // added accidentals/s per channel
    KeyRateReport report;
};

/// One report per noise fraction. Analytic and replay modes are
/// seed-independent; Monte Carlo mode is deterministic per seed.
/// Grid points are evaluated in parallel.
std::vector<ScenarioResult> run_scenario(const Scenario& s);

std::string results_to_csv(const std::vector<ScenarioResult>& results);
std::string results_to_json(const std::vector<ScenarioResult>& results);

struct CurvePoint {
    double p = 0.0;
    double noise = 0.0;
    double bpsc = 0.0;
    double bps = 0.0;
    bool no_key = false;
};

struct CurveData {
    int d = 0;
    int k = 0;
    std::vector<CurvePoint> points;
    std::optional<double> crossover_p;  // zero-rate noise fraction
};

/// Analytic rate curve over p in [0, 0.95] with the given step; the
/// crossover is located by bisection to 1e-4 in p.
CurveData emit_curves(const Scenario& s, double p_step);

std::string curves_to_csv(const CurveData& c);
std::string curves_to_json(const CurveData& c);

/// log2 k - H(e_k) - H(e_t) for the isotropic model at noise fraction p.
double analytic_bpsc(int d, int k, PhaseFlavor flavor, double p);

} // namespace hdqkd
