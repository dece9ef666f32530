#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hdqkd {

/// One subspace row of a published dataset.
struct RefSubspace {
    std::string block;          // "S1", "S2", ...
    double pr = 0.0;            // subspace probability weight
    double bpc = 0.0;           // bits per coincidence within the block
    double h_et = 0.0;
    double h_ek = 0.0;
    std::vector<double> e_t;    // empty when the dataset reports only H(e_t)
    std::vector<double> e_k;
};

/// One noise setting: aggregate figures plus per-subspace rows.
struct RefPoint {
    double p = 0.0;             // isotropic-noise fraction
    double noise = 0.0;         // added accidental coincidences/s per channel
    double bpsc = 0.0;
    double bpsc_err = 0.0;
    double tscs = 0.0;
    double bps = 0.0;
    double bps_err = 0.0;
    double tcs = 0.0;
    std::optional<double> f_plus;
    std::vector<RefSubspace> subspaces;
};

struct RefDataset {
    std::string name;           // e.g. "d8k4"
    int d = 0;
    int k = 0;
    std::vector<RefPoint> points;
};

RefDataset load_dataset(const std::string& path);

/// Loads the six shipped datasets from `dir` (d8k8, d8k4, d8k2, d4k4,
/// d4k2, d2k2).
std::vector<RefDataset> load_all_datasets(const std::string& dir);

struct CheckItem {
    std::string dataset;
    double p = 0.0;
    std::string block;          // "-" for aggregate checks
    std::string what;
    double expected = 0.0;
    double actual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct CheckReport {
    std::vector<CheckItem> items;
    bool pass = true;
    int n_pass = 0;
    int n_fail = 0;
};

/// Internal-consistency checks on one dataset:
///  - H(e_t), H(e_k) recomputed from the printed vectors (tol 0.02)
///  - per-block bpc = log2 k - H(e_k) - H(e_t) (tol 0.02)
///  - bpsc = weighted average of per-block bpc (tol 0.01)
///  - bps = bpsc * tscs (within the printed bps error bar)
///  - noise = (tcs_noisy - tcs_clean) / d (tol 0.2)
///  - where a fidelity is given, H(e_t) from the fidelity bound (tol 0.003)
CheckReport check_dataset(const RefDataset& data);

void merge_report(CheckReport& into, const CheckReport& from);
std::string report_to_text(const CheckReport& r);
std::string report_to_json(const CheckReport& r);
std::string report_to_csv(const CheckReport& r);

} // namespace hdqkd
