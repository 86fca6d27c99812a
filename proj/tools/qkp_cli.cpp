// Command-line front end: runs each solver and serializes results as CSV or
// JSON.  Identical configurations produce byte-identical output files.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qkp/channel_scatter.hpp"
#include "qkp/core.hpp"
#include "qkp/floquet.hpp"
#include "qkp/kp1d.hpp"
#include "qkp/wkb.hpp"

namespace {

using json = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
}

struct CommonOpts {
    double lambda_scaled = 0.0;
    double L = 1.0;
    double eta_min = qkp::kEtaMinDefault;
    double tol = 1e-10;
    int omega_steps = 500;
    int eta_steps = 200;
    int m_start = 0;
    int m0 = 3;
    int threads = 1;
    std::string out;
    std::string format = "csv";
};

json config_json(const CommonOpts& o, const std::string& command) {
    json c;
    c["command"] = command;
    c["lambda_scaled"] = o.lambda_scaled;
    c["lambda"] = o.lambda_scaled * std::sqrt(2.0);
    c["L"] = o.L;
    c["eta_min"] = o.eta_min;
    c["tol"] = o.tol;
    c["omega_steps"] = o.omega_steps;
    c["eta_steps"] = o.eta_steps;
    c["m_start"] = o.m_start;
    c["m0"] = o.m0;
    c["threads"] = o.threads;
    return c;
}

void emit(const CommonOpts& o, const std::string& command,
          const std::string& csv, json results) {
    if (o.format == "csv") {
        write_out(o.out, csv);
        return;
    }
    json doc;
    doc["schema_version"] = 1;
    doc["config"] = config_json(o, command);
    doc["results"] = std::move(results);
    write_out(o.out, doc.dump(2) + "\n");
}

int run_kp1d_bands(const CommonOpts& o) {
    const qkp::ModelParams p =
        qkp::ModelParams::from_raw(o.lambda_scaled * std::sqrt(2.0), o.L);
    std::vector<double> omegas;
    for (int i = 0; i < o.omega_steps; ++i)
        omegas.push_back(M_PI * i / (o.omega_steps - 1.0));
    const auto rows = qkp::kp1d::negative_bands_1d(p, omegas, o.tol);

    std::ostringstream csv;
    csv << "omega,kappa\n";
    json jrows = json::array();
    for (const auto& row : rows) {
        json jr;
        jr["omega"] = row.omega;
        jr["roots"] = row.roots;
        jrows.push_back(jr);
        for (double r : row.roots)
            csv << fmt17(row.omega) << "," << fmt17(r) << "\n";
    }
    json results;
    results["rows"] = std::move(jrows);
    emit(o, "kp1d-bands", csv.str(), std::move(results));
    return 0;
}

int run_single_spectrum(const CommonOpts& o) {
    const auto roots = qkp::channel::point_spectrum(o.lambda_scaled, o.eta_min,
                                                    0.5 - o.eta_min, o.tol);
    std::ostringstream csv;
    csv << "index,eta\n";
    for (std::size_t i = 0; i < roots.size(); ++i)
        csv << i << "," << fmt17(roots[i]) << "\n";
    json results;
    results["count"] = roots.size();
    results["eta"] = roots;
    emit(o, "single-spectrum", csv.str(), std::move(results));
    return 0;
}

int run_wkb_spectrum(const CommonOpts& o) {
    const auto roots =
        qkp::wkb::wkb_spectrum(o.lambda_scaled, o.m0, o.tol, o.eta_min);
    std::ostringstream csv;
    csv << "index,eta\n";
    for (std::size_t i = 0; i < roots.size(); ++i)
        csv << i << "," << fmt17(roots[i]) << "\n";
    json results;
    results["count"] = roots.size();
    results["eta"] = roots;
    emit(o, "wkb-spectrum", csv.str(), std::move(results));
    return 0;
}

int run_floquet_scan(const CommonOpts& o) {
    qkp::floquet::ScanOptions opt;
    opt.n_omega = o.omega_steps;
    opt.n_eta = o.eta_steps;
    opt.eta_min = o.eta_min;
    opt.m_start = o.m_start;
    opt.threads = o.threads;
    const auto grid = qkp::floquet::grid_scan(
        qkp::ModelParams::from_scaled(o.lambda_scaled, o.L), opt);

    std::ostringstream csv;
    csv << "omega,eta,zeta\n";
    for (std::size_t i = 0; i < grid.omegas.size(); ++i)
        for (std::size_t j = 0; j < grid.etas.size(); ++j)
            csv << fmt17(grid.omegas[i]) << "," << fmt17(grid.etas[j]) << ","
                << fmt17(grid.at(static_cast<int>(i), static_cast<int>(j)))
                << "\n";
    json results;
    results["omega"] = grid.omegas;
    results["eta"] = grid.etas;
    results["zeta"] = grid.zeta;
    emit(o, "floquet-scan", csv.str(), std::move(results));
    return 0;
}

int run_floquet_bands(const CommonOpts& o) {
    qkp::floquet::BandPipelineOptions opt;
    opt.scan.n_omega = o.omega_steps;
    opt.scan.n_eta = o.eta_steps;
    opt.scan.eta_min = o.eta_min;
    opt.scan.m_start = o.m_start;
    opt.scan.threads = o.threads;
    opt.tol = o.tol;
    const auto r = qkp::floquet::floquet_bands(
        qkp::ModelParams::from_scaled(o.lambda_scaled, o.L), opt);

    if (o.format == "csv") {
        std::ostringstream curves_csv;
        curves_csv << "curve_id,omega,eta\n";
        for (std::size_t c = 0; c < r.traced.curves.size(); ++c)
            for (const auto& [w, eta] : r.traced.curves[c].points)
                curves_csv << c << "," << fmt17(w) << "," << fmt17(eta) << "\n";
        write_out(o.out, curves_csv.str());

        std::ostringstream bands_csv;
        bands_csv << "band_id,eta_lo,eta_hi\n";
        for (const auto& b : r.bands.bands)
            bands_csv << b.index << "," << fmt17(b.lo) << "," << fmt17(b.hi)
                      << "\n";
        write_out(o.out.empty() ? "" : o.out + ".bands.csv", bands_csv.str());
        return 0;
    }

    json results;
    results["curve_count"] = r.bands.curve_count;
    results["fragment_count"] = r.traced.fragments.size();
    json jcurves = json::array();
    for (const auto& c : r.traced.curves) {
        json pts = json::array();
        for (const auto& [w, eta] : c.points) pts.push_back({w, eta});
        json jc;
        jc["points"] = std::move(pts);
        jcurves.push_back(std::move(jc));
    }
    results["curves"] = std::move(jcurves);
    json jbands = json::array();
    for (const auto& b : r.bands.bands) {
        json jb;
        jb["band_id"] = b.index;
        jb["eta_lo"] = b.lo;
        jb["eta_hi"] = b.hi;
        jbands.push_back(std::move(jb));
    }
    results["bands"] = std::move(jbands);
    emit(o, "floquet-bands", "", std::move(results));
    return 0;
}

int run_potential_table(const CommonOpts& o, bool have_l) {
    const std::vector<double> l_values =
        have_l ? std::vector<double>{o.L} : std::vector<double>{0.5, 1.5, 5.0};
    const std::vector<double> omegas = {M_PI / 4, M_PI / 2, 3 * M_PI / 4};
    std::vector<double> etas;
    for (int k = 0; k <= 6; ++k) etas.push_back(k / 12.0);

    std::ostringstream csv;
    csv << "L,omega,eta,m,V,V_scaled\n";
    json jrows = json::array();
    const double vinf = 2.0 / o.lambda_scaled;
    for (double L : l_values) {
        const qkp::ModelParams p =
            qkp::ModelParams::from_scaled(o.lambda_scaled, L);
        for (double w : omegas)
            for (double eta : etas)
                for (double m = 0.0; m <= 60.0; m += 0.5) {
                    const double v = qkp::wkb::potential_periodic(m, eta, w, p);
                    const double vs = (v - 2.0) / (vinf - 2.0);
                    csv << fmt17(L) << "," << fmt17(w) << "," << fmt17(eta)
                        << "," << fmt17(m) << "," << fmt17(v) << ","
                        << fmt17(vs) << "\n";
                    if (o.format != "csv")
                        jrows.push_back({L, w, eta, m, v, vs});
                }
    }
    json results;
    results["columns"] = {"L", "omega", "eta", "m", "V", "V_scaled"};
    results["rows"] = std::move(jrows);
    emit(o, "potential-table", csv.str(), std::move(results));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kronig-Penney model in a quadratic channel: spectra, secular "
                 "functions, Floquet scans and spectral bands"};
    app.require_subcommand(1);

    CommonOpts o;
    double lambda_raw = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        auto* ls = cmd->add_option("--lambda-scaled", o.lambda_scaled,
                                   "interaction strength Lambda = lambda/sqrt(2)");
        auto* lr =
            cmd->add_option("--lambda", lambda_raw,
                            "raw coupling lambda (exclusive with --lambda-scaled)");
        ls->excludes(lr);
        lr->excludes(ls);
        cmd->add_option("--L", o.L, "lattice period L");
        cmd->add_option("--eta-min", o.eta_min, "lower eta clamp");
        cmd->add_option("--tol", o.tol, "root refinement tolerance");
        cmd->add_option("--m-start", o.m_start,
                        "backward recursion start depth (0: automatic)");
        cmd->add_option("--m0", o.m0, "WKB matching index");
        cmd->add_option("--omega-steps", o.omega_steps, "omega grid points");
        cmd->add_option("--eta-steps", o.eta_steps, "eta grid points");
        cmd->add_option("--threads", o.threads, "worker threads");
        cmd->add_option("--out", o.out, "output path (default: stdout)");
        cmd->add_option("--format", o.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* kp1d = app.add_subcommand("kp1d-bands",
                                        "negative-energy bands of the 1D model");
    CLI::App* single = app.add_subcommand("single-spectrum",
                                          "point spectrum of the single vertex");
    CLI::App* wkbs =
        app.add_subcommand("wkb-spectrum", "semiclassical spectrum estimate");
    CLI::App* fscan = app.add_subcommand(
        "floquet-scan", "secular function on an (omega, eta) grid");
    CLI::App* fbands = app.add_subcommand(
        "floquet-bands", "traced Floquet curves and spectral bands");
    CLI::App* ptable = app.add_subcommand(
        "potential-table", "scaled periodic effective potential family");
    for (CLI::App* cmd : {kp1d, single, wkbs, fscan, fbands, ptable})
        add_common(cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* cmd = app.get_subcommands().front();
        const bool have_raw = cmd->count("--lambda") > 0;
        const bool have_scaled = cmd->count("--lambda-scaled") > 0;
        if (have_raw) o.lambda_scaled = lambda_raw / std::sqrt(2.0);
        if (!have_raw && !have_scaled)
            throw std::domain_error("one of --lambda-scaled / --lambda is required");

        if (cmd == kp1d) {
            if (cmd->count("--omega-steps") == 0) o.omega_steps = 21;
            return run_kp1d_bands(o);
        }
        if (cmd == single) return run_single_spectrum(o);
        if (cmd == wkbs) return run_wkb_spectrum(o);
        if (cmd == fscan) return run_floquet_scan(o);
        if (cmd == fbands) return run_floquet_bands(o);
        if (cmd == ptable) return run_potential_table(o, cmd->count("--L") > 0);
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error (domain): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
