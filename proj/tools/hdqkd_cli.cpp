#include "hdqkd/optical_cascade.hpp"
#include "hdqkd/refdata.hpp"
#include "hdqkd/scenario.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        throw std::runtime_error("cannot open output file " + out_path);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct CommonOpts {
    int d = 8;
    int k = 8;
    std::vector<double> p_list;
    std::string flavor;
    double pairs_per_sec = 4000.0;
    double duration = 1.0;
    std::uint64_t seed = 1;
    std::string mode;
    std::string out;
    std::string format = "csv";
    std::string config;
    std::string data_dir;
};

void add_scenario_flags(CLI::App* cmd, CommonOpts& o, bool with_mc) {
    cmd->add_option("--d", o.d, "local dimension");
    cmd->add_option("--k", o.k, "subspace size (divides d)");
    cmd->add_option("--p", o.p_list, "isotropic noise fraction(s) in [0,1)");
    cmd->add_option("--flavor", o.flavor, "test-basis phase convention: fourier|hadamard");
    cmd->add_option("--pairs-per-sec", o.pairs_per_sec, "clean coincidence rate");
    if (with_mc) {
        cmd->add_option("--duration", o.duration, "acquisition time, seconds");
        cmd->add_option("--seed", o.seed, "RNG seed");
    }
    cmd->add_option("--mode", o.mode, "analytic|montecarlo|paper-data");
    cmd->add_option("--out", o.out, "output path (stdout when omitted)");
    cmd->add_option("--format", o.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--config", o.config, "JSON scenario file overriding flags");
    cmd->add_option("--data-dir", o.data_dir, "dataset directory (paper-data mode)");
}

hdqkd::Scenario build_scenario(const CommonOpts& o, hdqkd::ScenarioMode default_mode) {
    if (!o.config.empty())
        return hdqkd::Scenario::from_json_text(read_file(o.config));
    hdqkd::Scenario s;
    s.d = o.d;
    s.k = o.k;
    s.p_list = o.p_list.empty() ? std::vector<double>{0.0} : o.p_list;
    s.flavor = o.flavor.empty() ? hdqkd::default_flavor(o.k)
                                : hdqkd::flavor_from_string(o.flavor);
    s.pair_rate = o.pairs_per_sec;
    s.duration = o.duration;
    s.seed = o.seed;
    s.mode = o.mode.empty() ? default_mode : hdqkd::scenario_mode_from_string(o.mode);
    s.data_dir = o.data_dir;
    s.validate();
    return s;
}

int run_reports(const CommonOpts& o, hdqkd::ScenarioMode default_mode) {
    const auto s = build_scenario(o, default_mode);
    const auto results = hdqkd::run_scenario(s);
    write_output(o.format == "json" ? hdqkd::results_to_json(results)
                                    : hdqkd::results_to_csv(results),
                 o.out);
    return 0;
}

int run_reproduce(const CommonOpts& o) {
    const std::string dir = o.data_dir.empty() ? "data/experiments" : o.data_dir;
    hdqkd::CheckReport total;
    for (const auto& data : hdqkd::load_all_datasets(dir))
        hdqkd::merge_report(total, hdqkd::check_dataset(data));
    if (o.format == "json")
        write_output(hdqkd::report_to_json(total), o.out);
    else
        write_output(hdqkd::report_to_csv(total), o.out);
    std::cerr << (total.pass ? "PASS" : "FAIL") << ": " << total.n_pass
              << " checks passed, " << total.n_fail << " failed\n";
    return total.pass ? 0 : 1;
}

int run_cascade_verify(const std::string& network_file, const std::string& setting_file,
                       const CommonOpts& o) {
    bool all_pass = true;
    std::ostringstream report;
    if (!setting_file.empty()) {
        const auto setting = hdqkd::setting_from_text(read_file(setting_file));
        const auto& net = network_file.empty()
                              ? hdqkd::network_by_name(setting.network)
                              : hdqkd::network_from_text(read_file(network_file));
        const auto result = hdqkd::verify_table(net, setting);
        all_pass = result.pass;
        report << hdqkd::verify_report_json(setting, result) << '\n';
    } else {
        report << "[\n";
        bool first = true;
        for (const auto& setting : hdqkd::builtin_settings()) {
            const auto result =
                hdqkd::verify_table(hdqkd::network_by_name(setting.network), setting);
            all_pass = all_pass && result.pass;
            if (!first)
                report << ",\n";
            first = false;
            report << hdqkd::verify_report_json(setting, result);
            std::cerr << (result.pass ? "PASS " : "FAIL ") << setting.name << '\n';
        }
        report << "\n]\n";
    }
    write_output(report.str(), o.out);
    return all_pass ? 0 : 1;
}

int run_curves(const CommonOpts& o, double p_step) {
    auto s = build_scenario(o, hdqkd::ScenarioMode::Analytic);
    const auto curve = hdqkd::emit_curves(s, p_step);
    write_output(o.format == "json" ? hdqkd::curves_to_json(curve)
                                    : hdqkd::curves_to_csv(curve),
                 o.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"High-dimensional QKD subspace post-selection toolkit"};
    app.require_subcommand(1);

    CommonOpts o;
    auto* keyrate = app.add_subcommand("keyrate", "analytic key-rate reports");
    add_scenario_flags(keyrate, o, false);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo coincidence runs");
    add_scenario_flags(simulate, o, true);

    auto* reproduce = app.add_subcommand("reproduce", "consistency checks on shipped datasets");
    reproduce->add_option("--data-dir", o.data_dir, "dataset directory");
    reproduce->add_option("--out", o.out, "output path");
    reproduce->add_option("--format", o.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string network_file, setting_file;
    auto* cascade = app.add_subcommand("cascade-verify",
                                       "check measurement-cascade detector tables");
    cascade->add_option("--network", network_file, "network config file");
    cascade->add_option("--setting", setting_file, "measurement setting file");
    cascade->add_option("--out", o.out, "output path");

    double p_step = 0.01;
    auto* curves = app.add_subcommand("curves", "rate-vs-noise curve data");
    add_scenario_flags(curves, o, false);
    curves->add_option("--p-step", p_step, "noise-fraction grid step");

    CLI11_PARSE(app, argc, argv);

    try {
        if (keyrate->parsed())
            return run_reports(o, hdqkd::ScenarioMode::Analytic);
        if (simulate->parsed())
            return run_reports(o, hdqkd::ScenarioMode::MonteCarlo);
        if (reproduce->parsed())
            return run_reproduce(o);
        if (cascade->parsed())
            return run_cascade_verify(network_file, setting_file, o);
        if (curves->parsed())
            return run_curves(o, p_step);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
