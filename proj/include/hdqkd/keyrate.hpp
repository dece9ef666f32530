#pragma once

#include "hdqkd/protocol_stats.hpp"

#include <optional>
#include <string>

namespace hdqkd {

struct SubspaceRate {
    int block = 0;
    ErrorVector e_t;
    ErrorVector e_k;
    double h_t = 0.0;
    double h_k = 0.0;
    double bpc = 0.0;   // bits per coincidence within this block
    double weight = 0.0;
};

/// Full rate accounting for one (d, k) scenario. Negative rates are kept
/// as-is and flagged so noise-threshold crossovers stay visible.
struct KeyRateReport {
    int d = 0;
    int k = 0;
    std::vector<SubspaceRate> per_subspace;
    double bpsc = 0.0;                 // weighted average of per-block bpc
    double tscs = 0.0;                 // subspace-post-selected coincidences/s
    double bps = 0.0;                  // bpsc * tscs
    double bpsc_err = 0.0;             // statistical, Monte Carlo mode only
    std::optional<double> f_plus;
    bool no_key = false;               // bpsc <= 0

    std::string to_json() const;
    static std::string csv_header();
    std::string to_csv_row(double noise, double p) const;
};

/// Entropy bound derived from the fidelity to the maximally entangled state:
/// the largest H of any length-d probability vector whose leading entry is
/// at least f_plus. Vacuous (log2 d) when f_plus < 1/d.
struct FidelityBound {
    double f_plus = 0.0;
    int d = 0;
    double h_t_bound = 0.0;
    bool vacuous = false;
};

/// log2(k) - H(e_k) - H(e_t); may be negative.
double keyrate_simple(int k, const ErrorVector& e_k, const ErrorVector& e_t);

/// Full analytic pipeline: key/test distributions, post-selection,
/// per-block error vectors and rates, weighted by key-basis block mass.
KeyRateReport keyrate_subspace(const BipartiteState& rho, int d, int k,
                               PhaseFlavor flavor);

FidelityBound entropy_bound_from_fidelity(double f_plus, int d);

/// log2(d) - H(e_k) - h_t_bound(f_plus).
double keyrate_fidelity_method(double f_plus, const ErrorVector& e_k, int d);

double bps(double bpsc, double tscs);

} // namespace hdqkd
