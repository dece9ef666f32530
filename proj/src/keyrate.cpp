#include "hdqkd/keyrate.hpp"

#include "json.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hdqkd {

double keyrate_simple(int k, const ErrorVector& e_k, const ErrorVector& e_t) {
    if (e_k.k() != k || e_t.k() != k)
        throw std::invalid_argument("keyrate_simple: vector length mismatch");
    return std::log2(static_cast<double>(k)) - shannon_entropy(e_k) -
           shannon_entropy(e_t);
}

KeyRateReport keyrate_subspace(const BipartiteState& rho, int d, int k,
                               PhaseFlavor flavor) {
    if (rho.local_dim() != d)
        throw std::invalid_argument("keyrate_subspace: dimension mismatch");
    const auto part = SubspacePartition::contiguous(d, k);
    const auto key = computational_basis(d);
    const auto test = subspace_test_basis(d, part, flavor);
    const auto test_bob = conjugate_basis(test);

    const auto p_key = joint_probabilities(rho, key, key);
    const auto p_test = joint_probabilities(rho, test, test_bob);
    const auto ps_key = subspace_postselect(p_key, part);
    const auto ps_test = subspace_postselect(p_test, part);

    KeyRateReport report;
    report.d = d;
    report.k = k;
    for (int m = 0; m < part.block_count(); ++m) {
        SubspaceRate r;
        r.block = m;
        r.e_k = error_vector(ps_key.blocks[m].conditional);
        r.e_t = error_vector(ps_test.blocks[m].conditional);
        r.h_k = shannon_entropy(r.e_k);
        r.h_t = shannon_entropy(r.e_t);
        r.bpc = keyrate_simple(k, r.e_k, r.e_t);
        // Key-basis generation rounds dominate, so their block masses weight
        // the average.
        r.weight = ps_key.blocks[m].weight;
        report.bpsc += r.weight * r.bpc;
        report.per_subspace.push_back(std::move(r));
    }
    report.no_key = report.bpsc <= 0.0;
    return report;
}

FidelityBound entropy_bound_from_fidelity(double f_plus, int d) {
    if (f_plus < 0.0 || f_plus > 1.0 || d < 2)
        throw std::invalid_argument("entropy_bound_from_fidelity: invalid input");
    FidelityBound b;
    b.f_plus = f_plus;
    b.d = d;
    if (f_plus < 1.0 / d) {
        b.vacuous = true;
        b.h_t_bound = std::log2(static_cast<double>(d));
        return b;
    }
    // Maximum-entropy completion: leading entry f_plus, remainder uniform.
    std::vector<double> v(d, (1.0 - f_plus) / (d - 1));
    v[0] = f_plus;
    b.h_t_bound = shannon_entropy(v);
    return b;
}

double keyrate_fidelity_method(double f_plus, const ErrorVector& e_k, int d) {
    if (e_k.k() != d)
        throw std::invalid_argument("keyrate_fidelity_method: e_k length mismatch");
    return std::log2(static_cast<double>(d)) - shannon_entropy(e_k) -
           entropy_bound_from_fidelity(f_plus, d).h_t_bound;
}

double bps(double bpsc, double tscs) {
    if (bpsc < 0.0 || tscs < 0.0)
        throw std::invalid_argument("bps: inputs must be nonnegative");
    return bpsc * tscs;
}

std::string KeyRateReport::to_json() const {
    nlohmann::json j;
    j["d"] = d;
    j["k"] = k;
    j["bpsc"] = bpsc;
    j["tscs"] = tscs;
    j["bps"] = bps;
    j["bpsc_err"] = bpsc_err;
    j["no_key"] = no_key;
    if (f_plus)
        j["f_plus"] = *f_plus;
    j["per_subspace"] = nlohmann::json::array();
    for (const auto& r : per_subspace) {
        nlohmann::json s;
        s["block"] = r.block;
        s["e_t"] = r.e_t.e;
        s["e_k"] = r.e_k.e;
        s["h_t"] = r.h_t;
        s["h_k"] = r.h_k;
        s["bpc"] = r.bpc;
        s["weight"] = r.weight;
        j["per_subspace"].push_back(std::move(s));
    }
    return j.dump(2);
}

std::string KeyRateReport::csv_header() {
    return "d,k,p,noise,bpsc,tscs,bps,block,pr,bpc,h_t,h_k,e_t,e_k";
}

namespace {
std::string join_vec(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(12);
    for (size_t i = 0; i < v.size(); ++i) {
        if (i)
            os << ';';
        os << v[i];
    }
    return os.str();
}
} // namespace

std::string KeyRateReport::to_csv_row(double noise, double p) const {
    std::ostringstream os;
    os.precision(12);
    for (const auto& r : per_subspace) {
        os << d << ',' << k << ',' << p << ',' << noise << ',' << bpsc << ','
           << tscs << ',' << bps << ",S" << (r.block + 1) << ',' << r.weight
           << ',' << r.bpc << ',' << r.h_t << ',' << r.h_k << ','
           << join_vec(r.e_t.e) << ',' << join_vec(r.e_k.e) << '\n';
    }
    return os.str();
}

} // namespace hdqkd
