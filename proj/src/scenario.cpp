#include "hdqkd/scenario.hpp"

#include "hdqkd/coincidence_sim.hpp"
#include "hdqkd/protocol_stats.hpp"
#include "hdqkd/quantum_state.hpp"
#include "hdqkd/refdata.hpp"

#include "json.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hdqkd {

ScenarioMode scenario_mode_from_string(const std::string& s) {
    if (s == "analytic")
        return ScenarioMode::Analytic;
    if (s == "montecarlo")
        return ScenarioMode::MonteCarlo;
    if (s == "paper-data")
        return ScenarioMode::PaperData;
    throw std::invalid_argument("mode: expected analytic|montecarlo|paper-data, got " + s);
}

std::string to_string(ScenarioMode m) {
    switch (m) {
    case ScenarioMode::Analytic: return "analytic";
    case ScenarioMode::MonteCarlo: return "montecarlo";
    case ScenarioMode::PaperData: return "paper-data";
    }
    return "?";
}

PhaseFlavor flavor_from_string(const std::string& s) {
    if (s == "fourier")
        return PhaseFlavor::ComplexFourier;
    if (s == "hadamard")
        return PhaseFlavor::RealHadamard;
    throw std::invalid_argument("flavor: expected fourier|hadamard, got " + s);
}

std::string to_string(PhaseFlavor f) {
    return f == PhaseFlavor::ComplexFourier ? "fourier" : "hadamard";
}

void Scenario::validate() const {
    if (d < 2)
        throw std::invalid_argument("d: must be >= 2");
    if (k < 2 || d % k != 0)
        throw std::invalid_argument("k: must be >= 2 and divide d");
    if (flavor == PhaseFlavor::RealHadamard && k != 2 && k != 4)
        throw std::invalid_argument("flavor: hadamard is defined for k in {2,4}");
    for (double p : p_list)
        if (p < 0.0 || p >= 1.0)
            throw std::invalid_argument("p: entries must be in [0,1)");
    if (mode == ScenarioMode::MonteCarlo) {
        if (duration <= 0.0)
            throw std::invalid_argument("duration: must be > 0 in montecarlo mode");
        if (pair_rate <= 0.0)
            throw std::invalid_argument("pairs-per-sec: must be > 0 in montecarlo mode");
    }
    if (mode == ScenarioMode::PaperData && data_dir.empty())
        throw std::invalid_argument("data_dir: required in paper-data mode");
}

Scenario Scenario::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario config: ") + e.what());
    }
    Scenario s;
    if (j.contains("d")) s.d = j["d"].get<int>();
    if (j.contains("k")) s.k = j["k"].get<int>();
    if (j.contains("p")) s.p_list = j["p"].get<std::vector<double>>();
    if (j.contains("flavor")) s.flavor = flavor_from_string(j["flavor"].get<std::string>());
    if (j.contains("pairs_per_sec")) s.pair_rate = j["pairs_per_sec"].get<double>();
    if (j.contains("duration")) s.duration = j["duration"].get<double>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("mode")) s.mode = scenario_mode_from_string(j["mode"].get<std::string>());
    if (j.contains("data_dir")) s.data_dir = j["data_dir"].get<std::string>();
    s.validate();
    return s;
}

std::string Scenario::to_json_text() const {
    nlohmann::json j;
    j["d"] = d;
    j["k"] = k;
    j["p"] = p_list;
    j["flavor"] = to_string(flavor);
    j["pairs_per_sec"] = pair_rate;
    j["duration"] = duration;
    j["seed"] = seed;
    j["mode"] = to_string(mode);
    if (!data_dir.empty())
        j["data_dir"] = data_dir;
    return j.dump(2);
}

namespace {

double noise_metric(double p, double pair_rate, int d) {
    if (p <= 0.0 || pair_rate <= 0.0)
        return 0.0;
    return noise_fraction_to_added_coincidences(p, pair_rate, d);
}

ScenarioResult run_analytic_point(const Scenario& s, double p) {
    ScenarioResult res;
    res.p = p;
    res.noise = noise_metric(p, s.pair_rate, s.d);
    const auto rho = apply_isotropic_noise(max_entangled_state(s.d), p);
    res.report = keyrate_subspace(rho, s.d, s.k, s.flavor);
    res.report.f_plus = fidelity_to_max_entangled(rho, s.d);
    // Same-subspace fraction of the isotropic joint distribution.
    const double ssp = (1.0 - p) + p * s.k / s.d;
    const double total_rate = s.pair_rate / (1.0 - p);
    res.report.tscs = total_rate * ssp;
    res.report.bps = res.report.bpsc * res.report.tscs;
    return res;
}

// First-order delta-method variance of H(e) with multinomial frequencies.
double entropy_variance(const ErrorVector& e, double n_samples) {
    if (n_samples <= 0.0)
        return 0.0;
    double var = 0.0;
    for (double ej : e.e) {
        if (ej <= 0.0 || ej >= 1.0)
            continue;
        const double dh = -(std::log2(ej) + 1.0 / std::numbers::ln2);
        var += dh * dh * ej * (1.0 - ej) / n_samples;
    }
    return var;
}

ScenarioResult run_montecarlo_point(const Scenario& s, double p, int index) {
    ScenarioResult res;
    res.p = p;
    res.noise = noise_metric(p, s.pair_rate, s.d);

    const auto part = SubspacePartition::contiguous(s.d, s.k);
    const auto rho = max_entangled_state(s.d);
    const auto key = computational_basis(s.d);
    const auto test = subspace_test_basis(s.d, part, s.flavor);
    const auto p_key = joint_probabilities(rho, key, key);
    const auto p_test = joint_probabilities(rho, test, conjugate_basis(test));

    SourceModel src;
    src.pair_rate = s.pair_rate;
    NoiseInjection noise;
    noise.channels_per_side = s.d;
    const double added = res.noise * s.d;  // total accidentals/s
    noise.singles_rate =
        added > 0.0 ? singles_rate_for_accidentals(added, s.d, src.coincidence_window)
                    : 0.0;

    // Disjoint seed blocks per grid point and per basis; each run derives
    // 64 shard seeds internally.
    const std::uint64_t base = s.seed + 0x10000ULL * static_cast<std::uint64_t>(2 * index);
    const auto key_table = simulate_run(p_key, src, noise, s.duration, base);
    const auto test_table = simulate_run(p_test, src, noise, s.duration, base + 0x10000ULL);
    const auto est_key = estimate_from_counts(key_table, part);
    const auto est_test = estimate_from_counts(test_table, part);

    KeyRateReport rep;
    rep.d = s.d;
    rep.k = s.k;
    const double log2k = std::log2(static_cast<double>(s.k));
    double var_bpsc = 0.0;
    for (int m = 0; m < part.block_count(); ++m) {
        SubspaceRate r;
        r.block = m;
        r.e_k = est_key.per_block[m];
        r.e_t = est_test.per_block[m];
        r.h_k = shannon_entropy(r.e_k);
        r.h_t = shannon_entropy(r.e_t);
        r.bpc = log2k - r.h_k - r.h_t;
        r.weight = est_key.weights[m];
        rep.bpsc += r.weight * r.bpc;
        const double n_key = est_key.weights[m] * est_key.tscs * s.duration;
        const double n_test = est_test.weights[m] * est_test.tscs * s.duration;
        var_bpsc += r.weight * r.weight *
                    (entropy_variance(r.e_k, n_key) + entropy_variance(r.e_t, n_test));
        rep.per_subspace.push_back(std::move(r));
    }
    rep.bpsc_err = std::sqrt(var_bpsc);
    rep.tscs = est_key.tscs;
    rep.bps = rep.bpsc * rep.tscs;
    rep.no_key = rep.bpsc <= 0.0;
    res.report = std::move(rep);
    return res;
}

std::vector<ScenarioResult> run_paper_data(const Scenario& s) {
    std::ostringstream name;
    name << "d" << s.d << "k" << s.k;
    const auto data = load_dataset(s.data_dir + "/" + name.str() + ".csv");
    std::vector<ScenarioResult> out;
    const double log2k = std::log2(static_cast<double>(s.k));
    for (const auto& pt : data.points) {
        if (!s.p_list.empty()) {
            bool wanted = false;
            for (double p : s.p_list)
                wanted = wanted || std::abs(p - pt.p) < 1e-12;
            if (!wanted)
                continue;
        }
        ScenarioResult res;
        res.p = pt.p;
        res.noise = pt.noise;
        KeyRateReport rep;
        rep.d = s.d;
        rep.k = s.k;
        rep.f_plus = pt.f_plus;
        rep.bpsc_err = pt.bpsc_err;
        for (const auto& sub : pt.subspaces) {
            SubspaceRate r;
            r.block = static_cast<int>(rep.per_subspace.size());
            r.e_t.e = sub.e_t;
            r.e_k.e = sub.e_k;
            r.h_t = sub.h_et;
            r.h_k = sub.h_ek;
            r.bpc = log2k - sub.h_ek - sub.h_et;  // recomputed, not copied
            r.weight = sub.pr;
            rep.bpsc += r.weight * r.bpc;
            rep.per_subspace.push_back(std::move(r));
        }
        rep.tscs = pt.tscs;
        rep.bps = rep.bpsc * rep.tscs;
        rep.no_key = rep.bpsc <= 0.0;
        res.report = std::move(rep);
        out.push_back(std::move(res));
    }
    return out;
}

} // namespace

std::vector<ScenarioResult> run_scenario(const Scenario& s) {
    s.validate();
    if (s.mode == ScenarioMode::PaperData)
        return run_paper_data(s);
    const int n = static_cast<int>(s.p_list.size());
    std::vector<ScenarioResult> out(n);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i)
        out[i] = s.mode == ScenarioMode::Analytic
                     ? run_analytic_point(s, s.p_list[i])
                     : run_montecarlo_point(s, s.p_list[i], i);
    return out;
}

std::string results_to_csv(const std::vector<ScenarioResult>& results) {
    std::ostringstream os;
    os << KeyRateReport::csv_header() << '\n';
    for (const auto& r : results)
        os << r.report.to_csv_row(r.noise, r.p);
    return os.str();
}

std::string results_to_json(const std::vector<ScenarioResult>& results) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json rj = nlohmann::json::parse(r.report.to_json());
        rj["p"] = r.p;
        rj["noise"] = r.noise;
        j.push_back(std::move(rj));
    }
    return j.dump(2);
}

double analytic_bpsc(int d, int k, PhaseFlavor flavor, double p) {
    const auto rho = apply_isotropic_noise(max_entangled_state(d), p);
    return keyrate_subspace(rho, d, k, flavor).bpsc;
}

CurveData emit_curves(const Scenario& s, double p_step) {
    s.validate();
    CurveData c;
    c.d = s.d;
    c.k = s.k;
    if (p_step <= 0.0)
        return c;

    std::vector<double> grid;
    for (double p = 0.0; p <= 0.95 + 1e-12; p += p_step)
        grid.push_back(std::min(p, 0.95));
    const int n = static_cast<int>(grid.size());
    c.points.resize(n);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        Scenario pt = s;
        pt.mode = ScenarioMode::Analytic;
        CurvePoint cp;
        cp.p = grid[i];
        cp.noise = noise_metric(grid[i], s.pair_rate, s.d);
        const auto res = run_analytic_point(pt, grid[i]);
        cp.bpsc = res.report.bpsc;
        cp.bps = res.report.bps;
        cp.no_key = res.report.no_key;
        c.points[i] = cp;
    }

    for (int i = 0; i + 1 < n; ++i) {
        if (c.points[i].bpsc > 0.0 && c.points[i + 1].bpsc <= 0.0) {
            double lo = c.points[i].p, hi = c.points[i + 1].p;
            while (hi - lo > 1e-4) {
                const double mid = 0.5 * (lo + hi);
                (analytic_bpsc(s.d, s.k, s.flavor, mid) > 0.0 ? lo : hi) = mid;
            }
            c.crossover_p = 0.5 * (lo + hi);
            break;
        }
    }
    return c;
}

std::string curves_to_csv(const CurveData& c) {
    std::ostringstream os;
    os.precision(12);
    os << "d,k,p,noise,bpsc,bps,no_key\n";
    for (const auto& p : c.points)
        os << c.d << ',' << c.k << ',' << p.p << ',' << p.noise << ',' << p.bpsc
           << ',' << p.bps << ',' << (p.no_key ? 1 : 0) << '\n';
    if (c.crossover_p)
        os << "# crossover_p=" << *c.crossover_p << '\n';
    return os.str();
}

std::string curves_to_json(const CurveData& c) {
    nlohmann::json j;
    j["d"] = c.d;
    j["k"] = c.k;
    if (c.crossover_p)
        j["crossover_p"] = *c.crossover_p;
    j["points"] = nlohmann::json::array();
    for (const auto& p : c.points) {
        nlohmann::json pj;
        pj["p"] = p.p;
        pj["noise"] = p.noise;
        pj["bpsc"] = p.bpsc;
        pj["bps"] = p.bps;
        pj["no_key"] = p.no_key;
        j["points"].push_back(std::move(pj));
    }
    return j.dump(2);
}

} // namespace hdqkd
