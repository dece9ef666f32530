#include "hdqkd/refdata.hpp"

#include "hdqkd/keyrate.hpp"
#include "hdqkd/protocol_stats.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace hdqkd {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, sep))
        out.push_back(field);
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

double num(const std::string& s) {
    return s.empty() ? std::nan("") : std::stod(s);
}

std::vector<double> vec(const std::string& s) {
    std::vector<double> out;
    if (s.empty())
        return out;
    for (const auto& f : split(s, ';'))
        out.push_back(std::stod(f));
    return out;
}

constexpr const char* kHeader =
    "d,k,p,block,noise,bpsc,bpsc_err,tscs,bps,bps_err,tcs,f_plus,pr,bpc,h_et,h_ek,e_t,e_k";

} // namespace

RefDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_dataset: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kHeader)
        throw std::runtime_error("load_dataset: unexpected header in " + path);

    RefDataset data;
    data.name = std::filesystem::path(path).stem().string();
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != 18)
            throw std::runtime_error("load_dataset: malformed row in " + path);
        const int d = std::stoi(f[0]);
        const int k = std::stoi(f[1]);
        if (data.d == 0) {
            data.d = d;
            data.k = k;
        } else if (data.d != d || data.k != k) {
            throw std::runtime_error("load_dataset: mixed (d,k) in " + path);
        }
        const double p = std::stod(f[2]);
        if (f[3] == "-") {
            RefPoint pt;
            pt.p = p;
            pt.noise = num(f[4]);
            pt.bpsc = num(f[5]);
            pt.bpsc_err = num(f[6]);
            pt.tscs = num(f[7]);
            pt.bps = num(f[8]);
            pt.bps_err = num(f[9]);
            pt.tcs = num(f[10]);
            if (!f[11].empty())
                pt.f_plus = std::stod(f[11]);
            data.points.push_back(std::move(pt));
        } else {
            if (data.points.empty() || data.points.back().p != p)
                throw std::runtime_error("load_dataset: subspace row before aggregate in " +
                                         path);
            RefSubspace s;
            s.block = f[3];
            s.pr = num(f[12]);
            s.bpc = num(f[13]);
            s.h_et = num(f[14]);
            s.h_ek = num(f[15]);
            s.e_t = vec(f[16]);
            s.e_k = vec(f[17]);
            data.points.back().subspaces.push_back(std::move(s));
        }
    }
    if (data.points.empty())
        throw std::runtime_error("load_dataset: no rows in " + path);
    return data;
}

std::vector<RefDataset> load_all_datasets(const std::string& dir) {
    std::vector<RefDataset> out;
    for (const char* name : {"d8k8", "d8k4", "d8k2", "d4k4", "d4k2", "d2k2"})
        out.push_back(load_dataset(dir + "/" + std::string(name) + ".csv"));
    return out;
}

namespace {

void add_item(CheckReport& r, const RefDataset& data, double p,
              const std::string& block, const std::string& what, double expected,
              double actual, double tol) {
    CheckItem item;
    item.dataset = data.name;
    item.p = p;
    item.block = block;
    item.what = what;
    item.expected = expected;
    item.actual = actual;
    item.tol = tol;
    item.pass = std::abs(expected - actual) <= tol;
    r.pass = r.pass && item.pass;
    (item.pass ? r.n_pass : r.n_fail)++;
    r.items.push_back(std::move(item));
}

} // namespace

CheckReport check_dataset(const RefDataset& data) {
    CheckReport r;
    const double log2k = std::log2(static_cast<double>(data.k));
    const double tcs_clean = data.points.front().tcs;

    for (const auto& pt : data.points) {
        double weighted_bpc = 0.0;
        for (const auto& s : pt.subspaces) {
            if (!s.e_t.empty())
                add_item(r, data, pt.p, s.block, "H(e_t) from vector", s.h_et,
                         shannon_entropy(s.e_t), 0.02);
            if (!s.e_k.empty())
                add_item(r, data, pt.p, s.block, "H(e_k) from vector", s.h_ek,
                         shannon_entropy(s.e_k), 0.02);
            add_item(r, data, pt.p, s.block, "bpc = log2 k - H(e_k) - H(e_t)",
                     s.bpc, log2k - s.h_ek - s.h_et, 0.02);
            weighted_bpc += s.pr * s.bpc;
        }
        add_item(r, data, pt.p, "-", "bpsc = sum pr * bpc", pt.bpsc, weighted_bpc,
                 0.01);
        add_item(r, data, pt.p, "-", "bps = bpsc * tscs", pt.bps,
                 bps(pt.bpsc, pt.tscs), pt.bps_err);
        add_item(r, data, pt.p, "-", "noise = (tcs - tcs_clean) / d", pt.noise,
                 (pt.tcs - tcs_clean) / data.d, 0.2);
        if (pt.f_plus) {
            const auto bound = entropy_bound_from_fidelity(*pt.f_plus, data.d);
            for (const auto& s : pt.subspaces)
                add_item(r, data, pt.p, s.block, "H(e_t) from fidelity bound",
                         s.h_et, bound.h_t_bound, 0.003);
        }
    }
    return r;
}

void merge_report(CheckReport& into, const CheckReport& from) {
    into.items.insert(into.items.end(), from.items.begin(), from.items.end());
    into.pass = into.pass && from.pass;
    into.n_pass += from.n_pass;
    into.n_fail += from.n_fail;
}

std::string report_to_text(const CheckReport& r) {
    std::ostringstream os;
    for (const auto& i : r.items) {
        os << (i.pass ? "PASS" : "FAIL") << ' ' << i.dataset << " p=" << i.p
           << ' ' << i.block << " | " << i.what << " | expected " << i.expected
           << " actual " << std::setprecision(6) << i.actual << " tol " << i.tol
           << '\n';
    }
    os << (r.pass ? "PASS" : "FAIL") << " total: " << r.n_pass << " passed, "
       << r.n_fail << " failed\n";
    return os.str();
}

std::string report_to_json(const CheckReport& r) {
    nlohmann::json j;
    j["pass"] = r.pass;
    j["n_pass"] = r.n_pass;
    j["n_fail"] = r.n_fail;
    j["items"] = nlohmann::json::array();
    for (const auto& i : r.items) {
        nlohmann::json ij;
        ij["dataset"] = i.dataset;
        ij["p"] = i.p;
        ij["block"] = i.block;
        ij["what"] = i.what;
        ij["expected"] = i.expected;
        ij["actual"] = i.actual;
        ij["tol"] = i.tol;
        ij["pass"] = i.pass;
        j["items"].push_back(std::move(ij));
    }
    return j.dump(2);
}

std::string report_to_csv(const CheckReport& r) {
    std::ostringstream os;
    os.precision(12);
    os << "dataset,p,block,check,expected,actual,tol,pass\n";
    for (const auto& i : r.items)
        os << i.dataset << ',' << i.p << ',' << i.block << ",\"" << i.what
           << "\"," << i.expected << ',' << i.actual << ',' << i.tol << ','
           << (i.pass ? 1 : 0) << '\n';
    return os.str();
}

} // namespace hdqkd
