#include "hdqkd/optical_cascade.hpp"

#include "json.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hdqkd {

ModeState ModeState::zero(int n_slots) {
    ModeState s;
    s.n_slots = n_slots;
    s.amps = Eigen::VectorXcd::Zero(2 * n_slots);
    return s;
}

Eigen::Matrix2d hwp_matrix(double theta_deg) {
    const double t = 2.0 * theta_deg * std::numbers::pi / 180.0;
    Eigen::Matrix2d m;
    m << std::cos(t), std::sin(t), std::sin(t), -std::cos(t);
    return m;
}

namespace {

void check_slot(const OpticalNetwork& net, int slot, const char* what) {
    if (slot < 0 || slot >= net.n_slots)
        throw std::out_of_range(std::string("OpticalNetwork: ") + what +
                                " routes to undeclared slot " + std::to_string(slot));
}

void apply_element(const OpticalNetwork& net, const Element& el, ModeState& s,
                   const std::map<std::string, double>& angles) {
    if (const auto* hwp = std::get_if<HwpElement>(&el)) {
        double angle = hwp->angle_deg;
        if (auto it = angles.find(hwp->id); it != angles.end())
            angle = it->second;
        const Eigen::Matrix2d m = hwp_matrix(angle);
        for (int slot : hwp->slots) {
            const auto h = s.at(slot, Pol::H);
            const auto v = s.at(slot, Pol::V);
            s.at(slot, Pol::H) = m(0, 0) * h + m(0, 1) * v;
            s.at(slot, Pol::V) = m(1, 0) * h + m(1, 1) * v;
        }
    } else if (const auto* bd = std::get_if<BdElement>(&el)) {
        std::vector<std::pair<int, std::complex<double>>> moved;
        for (int slot : bd->slots) {
            const auto v = s.at(slot, Pol::V);
            if (v != std::complex<double>(0.0)) {
                check_slot(net, slot + bd->offset, "beam displacer");
                moved.emplace_back(slot + bd->offset, v);
                s.at(slot, Pol::V) = 0.0;
            }
        }
        for (const auto& [dest, v] : moved)
            s.at(dest, Pol::V) += v;
    } else if (const auto* pbs = std::get_if<PbsElement>(&el)) {
        check_slot(net, pbs->h_out, "PBS");
        check_slot(net, pbs->v_out, "PBS");
        const auto h = s.at(pbs->slot, Pol::H);
        const auto v = s.at(pbs->slot, Pol::V);
        s.at(pbs->slot, Pol::H) = 0.0;
        s.at(pbs->slot, Pol::V) = 0.0;
        s.at(pbs->h_out, Pol::H) += h;
        s.at(pbs->v_out, Pol::V) += v;
    } else if (const auto* mir = std::get_if<MirrorElement>(&el)) {
        const ModeState before = s;
        for (const auto& [from, to] : mir->mapping) {
            s.at(from, Pol::H) = 0.0;
            s.at(from, Pol::V) = 0.0;
        }
        for (const auto& [from, to] : mir->mapping) {
            check_slot(net, to, "mirror");
            s.at(to, Pol::H) += before.at(from, Pol::H);
            s.at(to, Pol::V) += before.at(from, Pol::V);
        }
    }
}

} // namespace

ModeState propagate(const OpticalNetwork& net, const ModeState& in,
                    const std::map<std::string, double>& angles) {
    if (in.n_slots != net.n_slots)
        throw std::invalid_argument("propagate: mode state size mismatch");
    ModeState s = in;
    for (const auto& el : net.elements)
        apply_element(net, el, s, angles);
    if (std::abs(s.amps.norm() - in.amps.norm()) > 1e-12)
        throw std::domain_error("propagate: network is not norm-preserving");
    return s;
}

Eigen::VectorXcd detector_projector(const OpticalNetwork& net,
                                    const std::map<std::string, double>& angles,
                                    const Terminal& terminal) {
    Eigen::VectorXcd proj(net.d_in);
    for (int i = 0; i < net.d_in; ++i) {
        ModeState in = ModeState::zero(net.n_slots);
        in.at(net.input_slots[i], Pol::H) = 1.0;
        const ModeState out = propagate(net, in, angles);
        proj(i) = std::conj(out.at(terminal.slot, terminal.pol));
    }
    if (proj.norm() < 1e-9)
        throw std::domain_error("detector_projector: detector is unreachable");
    return proj;
}

VerifyResult verify_table(const OpticalNetwork& net, const MeasurementSetting& setting) {
    VerifyResult result;
    result.pass = true;
    for (const auto& [det, expected] : setting.expected) {
        const auto it = setting.detector_map.find(det);
        if (it == setting.detector_map.end())
            throw std::invalid_argument("verify_table: no terminal for detector " + det);
        DetectorCheck check;
        check.detector = det;
        Eigen::VectorXcd proj;
        try {
            proj = detector_projector(net, setting.angles, it->second);
        } catch (const std::domain_error&) {
            check.deviation = expected.norm();
            check.pass = false;
            result.pass = false;
            result.detectors.push_back(std::move(check));
            continue;
        }
        // Detectors measure intensity, so one global phase is quotiented out.
        std::complex<double> z = expected.dot(proj);
        if (std::abs(z) < 1e-12)
            z = 1.0;
        const Eigen::VectorXcd aligned = proj * std::conj(z) / std::abs(z);
        check.deviation = (aligned - expected).cwiseAbs().maxCoeff();
        check.pass = check.deviation <= 1e-10;
        result.pass = result.pass && check.pass;
        result.detectors.push_back(std::move(check));
    }
    return result;
}

namespace {

// Four-outcome cascade: polarization pre-setting on even paths, a displacer
// folding path pairs into polarization-encoded qubits, an intra-pair analyzer
// (HWP1 + PBS), then two inter-pair analyzers (HWP2/HWP3 + PBS) after the
// displaced recombination.
void append_four_outcome(OpticalNetwork& net, int base, int hwp_base) {
    auto id = [&](const char* prefix, int n) {
        return std::string(prefix) + std::to_string(n);
    };
    auto sl = [&](std::initializer_list<int> xs) {
        std::vector<int> v;
        for (int x : xs)
            v.push_back(base + x);
        return v;
    };
    net.elements.push_back(HwpElement{id("PRE", hwp_base), 45.0, sl({0, 2})});
    net.elements.push_back(BdElement{+1, sl({0, 2})});
    net.elements.push_back(HwpElement{id("HWP", hwp_base), 45.0, sl({1, 3})});
    net.elements.push_back(PbsElement{base + 1, base + 1, base + 0});
    net.elements.push_back(PbsElement{base + 3, base + 3, base + 2});
    net.elements.push_back(HwpElement{id("FLIPA", hwp_base), 45.0, sl({1})});
    net.elements.push_back(HwpElement{id("FLIPB", hwp_base), 45.0, sl({0})});
    net.elements.push_back(MirrorElement{{{base + 0, base + 2}, {base + 2, base + 0}}});
    net.elements.push_back(BdElement{+2, sl({0, 1})});
    net.elements.push_back(HwpElement{id("HWP", hwp_base + 1), 45.0, sl({3})});
    net.elements.push_back(HwpElement{id("HWP", hwp_base + 2), 45.0, sl({2})});
    net.elements.push_back(PbsElement{base + 3, base + 3, base + 4});
    net.elements.push_back(PbsElement{base + 2, base + 2, base + 5});
}

} // namespace

OpticalNetwork four_outcome_network() {
    OpticalNetwork net;
    net.name = "d4";
    net.d_in = 4;
    net.n_slots = 6;
    net.input_slots = {0, 1, 2, 3};
    append_four_outcome(net, 0, 1);
    return net;
}

OpticalNetwork two_outcome_network() {
    OpticalNetwork net = four_outcome_network();
    net.name = "d2";
    net.d_in = 2;
    net.input_slots = {0, 1};
    return net;
}

OpticalNetwork eight_outcome_network() {
    OpticalNetwork net;
    net.name = "d8";
    net.d_in = 8;
    net.n_slots = 14;
    net.input_slots = {0, 1, 2, 3, 4, 5, 6, 7};
    // Mirror separating upper (paths 0-3) and lower (paths 4-7) layers.
    net.elements.push_back(
        MirrorElement{{{4, 8}, {5, 9}, {6, 10}, {7, 11}}});
    append_four_outcome(net, 0, 1);
    append_four_outcome(net, 8, 4);
    return net;
}

const OpticalNetwork& network_by_name(const std::string& name) {
    static const OpticalNetwork d2 = two_outcome_network();
    static const OpticalNetwork d4 = four_outcome_network();
    static const OpticalNetwork d8 = eight_outcome_network();
    if (name == "d2")
        return d2;
    if (name == "d4")
        return d4;
    if (name == "d8")
        return d8;
    throw std::invalid_argument("unknown network: " + name);
}

namespace {

Eigen::VectorXcd ket(int d, int i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
    v(i) = 1.0;
    return v;
}

Eigen::VectorXcd pair_state(int d, int a, int b, double sign) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
    v(a) = 1.0 / std::sqrt(2.0);
    v(b) = sign / std::sqrt(2.0);
    return v;
}

Eigen::VectorXcd had4(int d, int base, int row) {
    static constexpr int kSigns[4][4] = {
        {1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
    for (int j = 0; j < 4; ++j)
        v(base + j) = 0.5 * kSigns[row][j];
    return v;
}

// Upper-layer exit terminals; the lower layer is the same pattern shifted by 8.
Terminal t1(int base) { return {base + 3, Pol::H}; }
Terminal t2(int base) { return {base + 4, Pol::V}; }
Terminal t3(int base) { return {base + 2, Pol::H}; }
Terminal t4(int base) { return {base + 5, Pol::V}; }

} // namespace

std::vector<MeasurementSetting> builtin_settings() {
    std::vector<MeasurementSetting> out;

    // With the stage-two analyzers at 45 degrees the two exit beams of the
    // final splitter swap ports, and the detector labels follow the beams;
    // the computational and k=2 settings therefore map D3/D4 (and D7/D8)
    // to the opposite terminals from the interfering settings.
    auto upper_swap = [](MeasurementSetting& s) {
        s.detector_map["D1"] = t1(0);
        s.detector_map["D2"] = t2(0);
        s.detector_map["D3"] = t4(0);
        s.detector_map["D4"] = t3(0);
    };
    auto upper_interf = [](MeasurementSetting& s) {
        s.detector_map["D1"] = t1(0);
        s.detector_map["D2"] = t2(0);
        s.detector_map["D3"] = t3(0);
        s.detector_map["D4"] = t4(0);
    };
    auto lower_swap = [](MeasurementSetting& s) {
        s.detector_map["D5"] = t1(8);
        s.detector_map["D6"] = t2(8);
        s.detector_map["D7"] = t4(8);
        s.detector_map["D8"] = t3(8);
    };
    auto lower_interf = [](MeasurementSetting& s) {
        s.detector_map["D5"] = t1(8);
        s.detector_map["D6"] = t2(8);
        s.detector_map["D7"] = t3(8);
        s.detector_map["D8"] = t4(8);
    };

    {
        MeasurementSetting s;
        s.name = "d2k2-computational";
        s.network = "d2";
        s.angles = {{"HWP1", 45}, {"HWP2", 45}, {"HWP3", 45}};
        s.detector_map = {{"D1", t1(0)}, {"D3", t4(0)}};
        s.expected = {{"D1", ket(2, 0)}, {"D3", ket(2, 1)}};
        out.push_back(std::move(s));
    }
    {
        MeasurementSetting s;
        s.name = "d2k2-fourier";
        s.network = "d2";
        s.angles = {{"HWP1", 22.5}, {"HWP2", 45}, {"HWP3", 45}};
        s.detector_map = {{"D1", t1(0)}, {"D3", t4(0)}};
        s.expected = {{"D1", pair_state(2, 0, 1, +1)}, {"D3", pair_state(2, 0, 1, -1)}};
        out.push_back(std::move(s));
    }
    {
        MeasurementSetting s;
        s.name = "d4k4-computational";
        s.network = "d4";
        s.angles = {{"HWP1", 45}, {"HWP2", 45}, {"HWP3", 0}};
        upper_interf(s);
        s.expected = {{"D1", ket(4, 0)}, {"D2", ket(4, 2)}, {"D3", ket(4, 1)},
                      {"D4", ket(4, 3)}};
        out.push_back(std::move(s));
    }
    {
        MeasurementSetting s;
        s.name = "d4k4-fourier";
        s.network = "d4";
        s.angles = {{"HWP1", 22.5}, {"HWP2", 22.5}, {"HWP3", 22.5}};
        upper_interf(s);
        s.expected = {{"D1", had4(4, 0, 0)}, {"D2", had4(4, 0, 1)},
                      {"D3", had4(4, 0, 2)}, {"D4", had4(4, 0, 3)}};
        out.push_back(std::move(s));
    }
    {
        MeasurementSetting s;
        s.name = "d4k2-computational";
        s.network = "d4";
        s.angles = {{"HWP1", 45}, {"HWP2", 45}, {"HWP3", 45}};
        upper_swap(s);
        s.expected = {{"D1", ket(4, 0)}, {"D2", ket(4, 2)}, {"D3", ket(4, 1)},
                      {"D4", ket(4, 3)}};
        out.push_back(std::move(s));
    }
    {
        MeasurementSetting s;
        s.name = "d4k2-fourier";
        s.network = "d4";
        s.angles = {{"HWP1", 22.5}, {"HWP2", 45}, {"HWP3", 45}};
        upper_swap(s);
        s.expected = {{"D1", pair_state(4, 0, 1, +1)}, {"D2", pair_state(4, 2, 3, +1)},
                      {"D3", pair_state(4, 0, 1, -1)}, {"D4", pair_state(4, 2, 3, -1)}};
        out.push_back(std::move(s));
    }
    {
        MeasurementSetting s;
        s.name = "d8k4-computational";
        s.network = "d8";
        s.angles = {{"HWP1", 45}, {"HWP2", 45}, {"HWP3", 45},
                    {"HWP4", 45}, {"HWP5", 45}, {"HWP6", 45}};
        upper_swap(s);
        lower_swap(s);
        s.expected = {{"D1", ket(8, 0)}, {"D2", ket(8, 2)}, {"D3", ket(8, 1)},
                      {"D4", ket(8, 3)}, {"D5", ket(8, 4)}, {"D6", ket(8, 6)},
                      {"D7", ket(8, 5)}, {"D8", ket(8, 7)}};
        out.push_back(std::move(s));
    }
    {
        MeasurementSetting s;
        s.name = "d8k4-fourier";
        s.network = "d8";
        s.angles = {{"HWP1", 22.5}, {"HWP2", 22.5}, {"HWP3", 22.5},
                    {"HWP4", 22.5}, {"HWP5", 22.5}, {"HWP6", 22.5}};
        upper_interf(s);
        lower_interf(s);
        s.expected = {{"D1", had4(8, 0, 0)}, {"D2", had4(8, 0, 1)},
                      {"D3", had4(8, 0, 2)}, {"D4", had4(8, 0, 3)},
                      {"D5", had4(8, 4, 0)}, {"D6", had4(8, 4, 1)},
                      {"D7", had4(8, 4, 2)}, {"D8", had4(8, 4, 3)}};
        out.push_back(std::move(s));
    }
    {
        MeasurementSetting s;
        s.name = "d8k2-computational";
        s.network = "d8";
        s.angles = {{"HWP1", 45}, {"HWP2", 45}, {"HWP3", 45},
                    {"HWP4", 45}, {"HWP5", 45}, {"HWP6", 45}};
        upper_swap(s);
        lower_swap(s);
        s.expected = {{"D1", ket(8, 0)}, {"D2", ket(8, 2)}, {"D3", ket(8, 1)},
                      {"D4", ket(8, 3)}, {"D5", ket(8, 4)}, {"D6", ket(8, 6)},
                      {"D7", ket(8, 5)}, {"D8", ket(8, 7)}};
        out.push_back(std::move(s));
    }
    {
        MeasurementSetting s;
        s.name = "d8k2-fourier";
        s.network = "d8";
        s.angles = {{"HWP1", 22.5}, {"HWP2", 45}, {"HWP3", 45},
                    {"HWP4", 22.5}, {"HWP5", 45}, {"HWP6", 45}};
        upper_swap(s);
        lower_swap(s);
        s.expected = {{"D1", pair_state(8, 0, 1, +1)}, {"D2", pair_state(8, 2, 3, +1)},
                      {"D3", pair_state(8, 0, 1, -1)}, {"D4", pair_state(8, 2, 3, -1)},
                      {"D5", pair_state(8, 4, 5, +1)}, {"D6", pair_state(8, 6, 7, +1)},
                      {"D7", pair_state(8, 4, 5, -1)}, {"D8", pair_state(8, 6, 7, -1)}};
        out.push_back(std::move(s));
    }
    return out;
}

std::string network_to_text(const OpticalNetwork& net) {
    std::ostringstream os;
    os << "network " << net.name << "\n";
    os << "slots " << net.n_slots << "\n";
    os << "inputs";
    for (int s : net.input_slots)
        os << ' ' << s;
    os << "\n";
    for (const auto& el : net.elements) {
        if (const auto* hwp = std::get_if<HwpElement>(&el)) {
            os << "hwp " << hwp->id << ' ' << hwp->angle_deg;
            for (int s : hwp->slots)
                os << ' ' << s;
            os << "\n";
        } else if (const auto* bd = std::get_if<BdElement>(&el)) {
            os << "bd " << bd->offset;
            for (int s : bd->slots)
                os << ' ' << s;
            os << "\n";
        } else if (const auto* pbs = std::get_if<PbsElement>(&el)) {
            os << "pbs " << pbs->slot << ' ' << pbs->h_out << ' ' << pbs->v_out << "\n";
        } else if (const auto* mir = std::get_if<MirrorElement>(&el)) {
            os << "mirror";
            for (const auto& [f, t] : mir->mapping)
                os << ' ' << f << ':' << t;
            os << "\n";
        }
    }
    return os.str();
}

OpticalNetwork network_from_text(const std::string& text) {
    OpticalNetwork net;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "network") {
            ls >> net.name;
        } else if (kind == "slots") {
            ls >> net.n_slots;
        } else if (kind == "inputs") {
            int s;
            while (ls >> s)
                net.input_slots.push_back(s);
            net.d_in = static_cast<int>(net.input_slots.size());
        } else if (kind == "hwp") {
            HwpElement e;
            ls >> e.id >> e.angle_deg;
            int s;
            while (ls >> s)
                e.slots.push_back(s);
            net.elements.push_back(std::move(e));
        } else if (kind == "bd") {
            BdElement e;
            ls >> e.offset;
            int s;
            while (ls >> s)
                e.slots.push_back(s);
            net.elements.push_back(std::move(e));
        } else if (kind == "pbs") {
            PbsElement e;
            ls >> e.slot >> e.h_out >> e.v_out;
            net.elements.push_back(e);
        } else if (kind == "mirror") {
            MirrorElement e;
            std::string tok;
            while (ls >> tok) {
                const auto c = tok.find(':');
                if (c == std::string::npos)
                    throw std::runtime_error("network config: bad mirror entry " + tok);
                e.mapping.emplace_back(std::stoi(tok.substr(0, c)),
                                       std::stoi(tok.substr(c + 1)));
            }
            net.elements.push_back(std::move(e));
        } else {
            throw std::runtime_error("network config: unknown directive " + kind);
        }
    }
    if (net.n_slots <= 0 || net.d_in <= 0)
        throw std::runtime_error("network config: missing slots/inputs");
    return net;
}

std::string setting_to_text(const MeasurementSetting& s) {
    std::ostringstream os;
    os.precision(17);
    os << "setting " << s.name << "\n";
    os << "network " << s.network << "\n";
    for (const auto& [id, angle] : s.angles)
        os << "angle " << id << ' ' << angle << "\n";
    for (const auto& [det, term] : s.detector_map)
        os << "detector " << det << ' ' << term.slot << ' '
           << (term.pol == Pol::H ? 'H' : 'V') << "\n";
    for (const auto& [det, vec] : s.expected) {
        os << "expect " << det;
        for (long i = 0; i < vec.size(); ++i)
            os << ' ' << vec(i).real();
        os << "\n";
    }
    return os.str();
}

MeasurementSetting setting_from_text(const std::string& text) {
    MeasurementSetting s;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "setting") {
            ls >> s.name;
        } else if (kind == "network") {
            ls >> s.network;
        } else if (kind == "angle") {
            std::string id;
            double a;
            ls >> id >> a;
            s.angles[id] = a;
        } else if (kind == "detector") {
            std::string det;
            int slot;
            char pol;
            ls >> det >> slot >> pol;
            s.detector_map[det] = {slot, pol == 'V' ? Pol::V : Pol::H};
        } else if (kind == "expect") {
            std::string det;
            ls >> det;
            std::vector<double> amps;
            double a;
            while (ls >> a)
                amps.push_back(a);
            Eigen::VectorXcd v(amps.size());
            for (size_t i = 0; i < amps.size(); ++i)
                v(static_cast<long>(i)) = amps[i];
            s.expected[det] = std::move(v);
        } else {
            throw std::runtime_error("setting config: unknown directive " + kind);
        }
    }
    return s;
}

std::string verify_report_json(const MeasurementSetting& s, const VerifyResult& r) {
    nlohmann::json j;
    j["setting"] = s.name;
    j["network"] = s.network;
    j["pass"] = r.pass;
    j["detectors"] = nlohmann::json::array();
    for (const auto& d : r.detectors) {
        nlohmann::json dj;
        dj["detector"] = d.detector;
        dj["deviation"] = d.deviation;
        dj["pass"] = d.pass;
        j["detectors"].push_back(std::move(dj));
    }
    return j.dump(2);
}

} // namespace hdqkd
