// Command-line front end: spectrum assembly, raw G-function scans, the
// exceptional-line figure, locus tracing, the diagonalization cross-check and
// the acceptance verification campaign.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "rabi/errors.hpp"
#include "rabi/exceptional.hpp"
#include "rabi/gfunction.hpp"
#include "rabi/io.hpp"
#include "rabi/model.hpp"
#include "rabi/oracle.hpp"
#include "rabi/rootfinder.hpp"
#include "rabi/spectrum.hpp"
#include "rabi/svg.hpp"
#include "rabi/verify.hpp"

namespace {

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::fputs(content.c_str(), stdout);
    } else {
        rabi::write_text_file(out_path, content);
    }
}

struct SpectrumOpts {
    rabi::ModelParams params;
    int levels{8};
    std::string format{"csv"};
    std::string out;
};

int run_spectrum(const SpectrumOpts& o) {
    const auto rows = rabi::assemble_spectrum(o.params, o.levels);
    emit(o.out, o.format == "json" ? rabi::spectrum_json(o.params, rows)
                                   : rabi::spectrum_csv(o.params, rows));
    return 0;
}

struct GscanOpts {
    rabi::ModelParams params;
    double x_lo{0.0};
    double x_hi{0.0};
    double step{0.0};  // 0: omega / kScanStepsPerOmega
    std::string out;
};

int run_gscan(const GscanOpts& o) {
    const rabi::ModelParams p = rabi::validate_params(o.params);
    if (!(o.x_hi >= o.x_lo)) {
        throw rabi::SolverError("gscan requires x-hi >= x-lo");
    }
    const double step = o.step > 0.0 ? o.step : p.omega / rabi::kScanStepsPerOmega;
    const double margin = rabi::pole_margin(p);
    const int last = static_cast<int>(std::ceil((o.x_hi - o.x_lo) / step - 1e-9));
    std::vector<rabi::GscanRow> rows;
    rows.reserve(static_cast<std::size_t>(last) + 1);
    for (int i = 0; i <= last; ++i) {
        const double x = i == last ? o.x_hi : o.x_lo + i * step;
        rabi::GscanRow row{x, {}, {}};
        const double nearest = std::round(x / p.omega);
        if (nearest < 0.0 || std::abs(x - nearest * p.omega) >= margin) {
            const rabi::GPair gp = rabi::g_pair(rabi::SpectralPoint{x, {}}, p, rabi::Truncation{});
            row.g_plus = gp.g_plus;
            row.g_minus = gp.g_minus;
        }
        rows.push_back(row);
    }
    emit(o.out, rabi::gscan_csv(p, rows));
    return 0;
}

struct FigureOpts {
    double omega{1.0};
    std::vector<int> levels{0, 1, 2, 3};
    int grid{400};
    double g_lo{0.02};
    double g_hi{1.0};
    std::string out;
};

int run_figure(const FigureOpts& o) {
    if (o.levels.empty()) {
        throw rabi::SolverError("figure requires at least one level index");
    }
    const rabi::ModelParams base{o.omega, 0.5 * o.omega, 0.5 * o.omega};
    std::vector<rabi::FigurePanel> panels;
    panels.reserve(o.levels.size());
    for (const int n : o.levels) {
        if (n < 0) {
            throw rabi::SolverError("figure level indices must be >= 0");
        }
        const rabi::PlaneWindow w{0.0, n + 2.5, o.g_lo, o.g_hi, o.grid, o.grid};
        auto cof = rabi::nondegenerate_locus(n, w, base);
        panels.push_back({n, w, rabi::juddian_locus(n, w, base), std::move(cof.first),
                          std::move(cof.second)});
    }
    rabi::write_text_file(o.out + ".svg", rabi::figure_svg(panels));
    std::vector<rabi::NamedContours> named;
    for (const rabi::FigurePanel& pn : panels) {
        named.push_back({"juddian", &pn.juddian});
        named.push_back({"cplus", &pn.cofactor_plus});
        named.push_back({"cminus", &pn.cofactor_minus});
    }
    rabi::write_text_file(o.out + ".csv", rabi::contours_csv(named));
    std::printf("wrote %s.svg and %s.csv\n", o.out.c_str(), o.out.c_str());
    return 0;
}

struct LocusOpts {
    double omega{1.0};
    int n{1};
    std::string set{"both"};
    double delta_lo{0.0};
    double delta_hi{-1.0};  // <0: n + 2.5
    double g_lo{0.02};
    double g_hi{1.0};
    int grid{400};
    std::string out;
};

int run_locus(const LocusOpts& o) {
    const rabi::ModelParams base{o.omega, 0.5 * o.omega, 0.5 * o.omega};
    const double delta_hi = o.delta_hi < 0.0 ? o.n + 2.5 : o.delta_hi;
    const rabi::PlaneWindow w{o.delta_lo, delta_hi, o.g_lo, o.g_hi, o.grid, o.grid};
    rabi::ContourSet juddian;
    std::pair<rabi::ContourSet, rabi::ContourSet> cof;
    std::vector<rabi::NamedContours> named;
    if (o.set == "juddian" || o.set == "both") {
        juddian = rabi::juddian_locus(o.n, w, base);
        named.push_back({"juddian", &juddian});
    }
    if (o.set == "cofactor" || o.set == "both") {
        cof = rabi::nondegenerate_locus(o.n, w, base);
        named.push_back({"cplus", &cof.first});
        named.push_back({"cminus", &cof.second});
    }
    emit(o.out, rabi::contours_csv(named));
    return 0;
}

struct OracleOpts {
    rabi::ModelParams params;
    int levels{8};
    int m_max{80};
    std::string out;
};

int run_oracle(const OracleOpts& o) {
    const rabi::OracleSpectrum s =
        rabi::oracle_spectrum(o.params, rabi::FockTruncation{o.m_max}, o.levels);
    emit(o.out, rabi::oracle_csv(o.params, s));
    return 0;
}

struct VerifyOpts {
    rabi::VerifyConfig cfg;
    std::string out;
};

int run_verify(const VerifyOpts& o) {
    const auto checks = rabi::run_verification(o.cfg);
    for (const rabi::CheckResult& c : checks) {
        std::printf("%s %s (measured %.3e, tolerance %.3e)\n    %s\n",
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured, c.tolerance,
                    c.detail.c_str());
    }
    int passed = 0;
    for (const rabi::CheckResult& c : checks) passed += c.pass;
    std::printf("%d/%d checks passed\n", passed, static_cast<int>(checks.size()));
    if (!o.out.empty()) {
        rabi::write_text_file(o.out, rabi::verification_json(checks, o.cfg));
    }
    return rabi::all_passed(checks) ? 0 : 1;
}

void add_model_flags(CLI::App* sub, rabi::ModelParams& p) {
    sub->add_option("--omega", p.omega, "Cavity frequency (> 0)")->capture_default_str();
    sub->add_option("--g", p.g, "Qubit-cavity coupling")->capture_default_str();
    sub->add_option("--delta", p.delta, "Qubit splitting (half-gap)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral solver for the quantum Rabi model"};
    app.require_subcommand(1);

    SpectrumOpts so;
    CLI::App* spectrum = app.add_subcommand(
        "spectrum", "Lowest eigenvalues: G-function roots plus exceptional levels");
    add_model_flags(spectrum, so.params);
    spectrum->add_option("--levels", so.levels, "Number of eigenvalues")->capture_default_str();
    spectrum->add_option("--format", so.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    spectrum->add_option("--out", so.out, "Output file (default: stdout)");

    GscanOpts go;
    CLI::App* gscan =
        app.add_subcommand("gscan", "Tabulate G+(x) and G-(x) over a spectral interval");
    add_model_flags(gscan, go.params);
    gscan->add_option("--x-lo", go.x_lo, "Interval start")->required();
    gscan->add_option("--x-hi", go.x_hi, "Interval end")->required();
    gscan->add_option("--step", go.step, "Grid step (default: omega / 200)");
    gscan->add_option("--out", go.out, "Output file (default: stdout)");

    FigureOpts fo;
    CLI::App* figure = app.add_subcommand(
        "figure", "Render the exceptional lines in the (delta, g) plane, one panel per level");
    figure->add_option("--omega", fo.omega, "Cavity frequency (> 0)")->capture_default_str();
    figure->add_option("--n", fo.levels, "Panel level indices")->capture_default_str();
    figure->add_option("--grid", fo.grid, "Sampling grid per axis")
        ->check(CLI::Range(2, 2000))
        ->capture_default_str();
    figure->add_option("--g-lo", fo.g_lo, "Bottom of the coupling window")->capture_default_str();
    figure->add_option("--g-hi", fo.g_hi, "Top of the coupling window")->capture_default_str();
    figure->add_option("--out", fo.out, "Output stem; writes <out>.svg and <out>.csv")->required();

    LocusOpts lo;
    CLI::App* locus =
        app.add_subcommand("locus", "Trace exceptional loci for one level as polyline CSV");
    locus->add_option("--omega", lo.omega, "Cavity frequency (> 0)")->capture_default_str();
    locus->add_option("--n", lo.n, "Level index")->required();
    locus->add_option("--set", lo.set, "Which loci to trace")
        ->check(CLI::IsMember({"juddian", "cofactor", "both"}))
        ->capture_default_str();
    locus->add_option("--delta-lo", lo.delta_lo, "Window left edge")->capture_default_str();
    locus->add_option("--delta-hi", lo.delta_hi, "Window right edge (default: n + 2.5)");
    locus->add_option("--g-lo", lo.g_lo, "Window bottom edge")->capture_default_str();
    locus->add_option("--g-hi", lo.g_hi, "Window top edge")->capture_default_str();
    locus->add_option("--grid", lo.grid, "Sampling grid per axis")
        ->check(CLI::Range(2, 2000))
        ->capture_default_str();
    locus->add_option("--out", lo.out, "Output file (default: stdout)");

    OracleOpts oo;
    CLI::App* oracle = app.add_subcommand(
        "oracle", "Independent truncated-Fock diagonalization of the same Hamiltonian");
    add_model_flags(oracle, oo.params);
    oracle->add_option("--levels", oo.levels, "Number of eigenvalues")->capture_default_str();
    oracle->add_option("--m-max", oo.m_max, "Fock truncation")->capture_default_str();
    oracle->add_option("--out", oo.out, "Output file (default: stdout)");

    VerifyOpts vo;
    CLI::App* verify =
        app.add_subcommand("verify", "Run the acceptance checks; nonzero exit on failure");
    verify->add_flag("--quick", vo.cfg.quick, "Reduced grids and sample counts");
    verify->add_option("--seed", vo.cfg.seed, "Random draw seed")->capture_default_str();
    verify->add_option("--out", vo.out, "Write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(spectrum)) return run_spectrum(so);
        if (app.got_subcommand(gscan)) return run_gscan(go);
        if (app.got_subcommand(figure)) return run_figure(fo);
        if (app.got_subcommand(locus)) return run_locus(lo);
        if (app.got_subcommand(oracle)) return run_oracle(oo);
        if (app.got_subcommand(verify)) return run_verify(vo);
    } catch (const rabi::SolverError& e) {
        std::cerr << "error [" << e.code() << "] " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error [Unexpected] " << e.what() << "\n";
        return 2;
    }
    return 0;
}
