#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace hdqkd {

enum class Pol { H = 0, V = 1 };

/// Amplitudes over (slot, polarization) modes. Index = slot*2 + pol.
struct ModeState {
    int n_slots = 0;
    Eigen::VectorXcd amps;

    static ModeState zero(int n_slots);
    std::complex<double>& at(int slot, Pol p) { return amps(slot * 2 + static_cast<int>(p)); }
    std::complex<double> at(int slot, Pol p) const { return amps(slot * 2 + static_cast<int>(p)); }
};

/// Half-wave plate on the listed slots. Angle may be overridden per run
/// when `id` appears in the angle setting.
struct HwpElement {
    std::string id;
    double angle_deg = 0.0;
    std::vector<int> slots;
};

/// Beam displacer: V amplitude in each acting slot moves by `offset` slots.
struct BdElement {
    int offset = 0;
    std::vector<int> slots;
};

/// Polarizing beam splitter on one slot: H routed to h_out, V to v_out.
struct PbsElement {
    int slot = 0;
    int h_out = 0;
    int v_out = 0;
};

/// Path permutation (slot -> slot), polarization untouched.
struct MirrorElement {
    std::vector<std::pair<int, int>> mapping;
};

using Element = std::variant<HwpElement, BdElement, PbsElement, MirrorElement>;

struct Terminal {
    int slot = 0;
    Pol pol = Pol::H;
};

struct OpticalNetwork {
    std::string name;
    int d_in = 0;
    int n_slots = 0;
    std::vector<int> input_slots;  // logical path -> slot, light enters H-polarized
    std::vector<Element> elements;
};

/// One measurement configuration: wave-plate angles, the detector-to-exit-port
/// map for that configuration, and the projector each detector should realize.
struct MeasurementSetting {
    std::string name;
    std::string network;
    std::map<std::string, double> angles;          // HWP id -> degrees
    std::map<std::string, Terminal> detector_map;  // detector id -> terminal
    std::map<std::string, Eigen::VectorXcd> expected;  // detector id -> input state
};

/// Jones matrix [[cos 2t, sin 2t], [sin 2t, -cos 2t]] in the {H,V} basis.
Eigen::Matrix2d hwp_matrix(double theta_deg);

ModeState propagate(const OpticalNetwork& net, const ModeState& in,
                    const std::map<std::string, double>& angles);

/// Input-space state routed entirely into the detector's terminal mode.
Eigen::VectorXcd detector_projector(const OpticalNetwork& net,
                                    const std::map<std::string, double>& angles,
                                    const Terminal& terminal);

struct DetectorCheck {
    std::string detector;
    double deviation = 0.0;  // max amplitude deviation after phase alignment
    bool pass = false;
};

struct VerifyResult {
    std::vector<DetectorCheck> detectors;
    bool pass = false;
};

/// Compares each detector's back-propagated state against the expected one,
/// up to a single global phase per detector. Tolerance 1e-10.
VerifyResult verify_table(const OpticalNetwork& net, const MeasurementSetting& setting);

/// The three experiment networks (d = 2 reuses the four-outcome network
/// with two input paths).
OpticalNetwork four_outcome_network();
OpticalNetwork eight_outcome_network();
OpticalNetwork two_outcome_network();
const OpticalNetwork& network_by_name(const std::string& name);

/// All shipped measurement configurations (computational and Fourier rows
/// for (d,k) in {(2,2),(4,4),(4,2),(8,4),(8,2)}).
std::vector<MeasurementSetting> builtin_settings();

// Plain-text config round-trip, so a different physical wiring can be
// substituted without recompiling.
std::string network_to_text(const OpticalNetwork& net);
OpticalNetwork network_from_text(const std::string& text);
std::string setting_to_text(const MeasurementSetting& s);
MeasurementSetting setting_from_text(const std::string& text);

/// Verification report as JSON (per-detector deviation).
std::string verify_report_json(const MeasurementSetting& s, const VerifyResult& r);

} // namespace hdqkd
