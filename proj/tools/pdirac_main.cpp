// Command-line front end: probe / bands / map / greens / verify-asymptotics /
// edge-limits, all driven by one JSON configuration document.
//
// Exit codes: 0 success, 2 configuration failure, 3 numerical failure (the
// failing lambda is reported on stderr).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pdirac/asymptotics.hpp"
#include "pdirac/bands.hpp"
#include "pdirac/config.hpp"
#include "pdirac/errors.hpp"
#include "pdirac/exclusion.hpp"
#include "pdirac/format.hpp"

namespace {

using namespace pdirac;

std::string json_num(double v) {
    if (!std::isfinite(v)) return "null";
    return fmt17(v);
}

std::string json_cplx(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return "null";
    return "[" + fmt17(z.real()) + ", " + fmt17(z.imag()) + "]";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << content;
}

int run_probe(const RunConfig& cfg) {
    const SpectralPoint sp{cfg.potential, cfg.mass, cfg.probe_lambda};
    const FloquetData fd = floquet_data(sp, cfg.tol);
    const PeriodicParts pp = periodic_parts(sp, fd, cfg.phi_nodes, MinusPath::Auto, cfg.tol);
    const double vnorm = cfg.perturbation.vnorm();
    const double p = cfg.perturbation.p();
    const double gamma = std::abs(column_det(fd.v_plus, fd.v_minus)) /
                         (fd.v_plus.norm() * fd.v_minus.norm());

    std::ostringstream os;
    os << "{\n";
    os << "  \"lambda\": " << json_cplx(fd.lambda) << ",\n";
    os << "  \"on_essential\": " << (fd.on_essential ? "true" : "false") << ",\n";
    os << "  \"discriminant\": " << json_cplx(fd.discriminant()) << ",\n";
    os << "  \"rho\": " << json_cplx(fd.rho()) << ",\n";
    os << "  \"k\": " << json_cplx(fd.k) << ",\n";
    os << "  \"im_k\": " << json_num(fd.im_k) << ",\n";
    os << "  \"gamma\": " << json_num(gamma) << ",\n";
    os << "  \"gamma_plus\": " << json_num(pp.gamma_plus) << ",\n";
    os << "  \"gamma_minus\": " << json_num(pp.gamma_minus) << ",\n";
    os << "  \"c_lambda\": " << json_num(c_lambda(pp, fd)) << ",\n";
    os << "  \"p\": " << json_num(p) << ",\n";
    os << "  \"vnorm\": " << json_num(vnorm) << ",\n";
    if (fd.on_essential) {
        os << "  \"F_p\": null,\n  \"excluded\": null\n";
    } else {
        const double f = threshold_F(fd, pp, p);
        os << "  \"F_p\": " << json_num(f) << ",\n";
        os << "  \"excluded\": " << (vnorm < f ? "true" : "false") << "\n";
    }
    os << "}\n";
    std::cout << os.str();
    return 0;
}

int run_bands(const RunConfig& cfg) {
    const BandStructure bs =
        scan_bands(cfg.potential, cfg.mass, cfg.re_min, cfg.re_max, cfg.scan_points);
    std::ostringstream os;
    write_band_csv(os, bs);
    const std::string path = cfg.out_dir + "/bands.csv";
    write_file(path, os.str());
    std::cout << "bands: " << bs.bands.size() << ", gaps: " << bs.gaps.size()
              << ", edges: " << bs.edges.size() << " -> " << path << "\n";
    for (const auto& w : bs.warnings) std::cerr << "warning: " << w << "\n";
    return 0;
}

int run_map(const RunConfig& cfg) {
    const double vnorm = cfg.perturbation.vnorm();
    MapOptions opt;
    opt.phi_nodes = cfg.phi_nodes;
    opt.workers = cfg.workers;
    opt.tol = cfg.tol;
    const ExclusionGrid grid =
        exclusion_map(cfg.potential, cfg.mass, cfg.re_min, cfg.re_max, cfg.im_min, cfg.im_max,
                      cfg.nx, cfg.ny, cfg.perturbation.p(), opt);
    const auto contours = extract_contour(grid, vnorm);

    std::ostringstream gs, cs;
    write_grid_csv(gs, grid);
    write_contour_csv(cs, contours);
    write_file(cfg.out_dir + "/map_grid.csv", gs.str());
    write_file(cfg.out_dir + "/map_contour.csv", cs.str());
    if (cfg.svg) {
        std::vector<Interval> bands;
        if (cfg.im_min < 0.0 && cfg.im_max > 0.0)
            bands = scan_bands(cfg.potential, cfg.mass, cfg.re_min, cfg.re_max,
                               cfg.scan_points)
                        .bands;
        std::ostringstream ss;
        write_contour_svg(ss, grid, contours, bands);
        write_file(cfg.out_dir + "/map_contour.svg", ss.str());
    }

    std::size_t excluded = 0, essential = 0, degenerate = 0, errors = 0;
    for (const auto& c : grid.cells) {
        if (c.flag == CellFlag::Ok && c.f_p > vnorm) ++excluded;
        if (c.flag == CellFlag::Essential) ++essential;
        if (c.flag == CellFlag::Degenerate) ++degenerate;
        if (c.flag == CellFlag::Error) ++errors;
    }
    std::cout << "cells: " << grid.cells.size() << ", excluded (F_p > " << fmt17(vnorm)
              << "): " << excluded << ", essential: " << essential
              << ", degenerate: " << degenerate << ", errors: " << errors
              << ", contours: " << contours.size() << " -> " << cfg.out_dir
              << "/map_grid.csv\n";
    return 0;
}

int run_greens(const RunConfig& cfg) {
    const SpectralPoint sp{cfg.potential, cfg.mass, cfg.probe_lambda};
    const FloquetData fd = floquet_data(sp, cfg.tol);
    const GreensEval ge = greens_kernel(sp, fd, cfg.greens_x, cfg.greens_t);
    std::ostringstream os;
    os << "{\n";
    os << "  \"lambda\": " << json_cplx(ge.lambda) << ",\n";
    os << "  \"x\": " << json_num(ge.x) << ",\n";
    os << "  \"t\": " << json_num(ge.t) << ",\n";
    os << "  \"G\": [[" << json_cplx(ge.g.a11) << ", " << json_cplx(ge.g.a12) << "], ["
       << json_cplx(ge.g.a21) << ", " << json_cplx(ge.g.a22) << "]],\n";
    os << "  \"frobenius\": " << json_num(ge.frob) << ",\n";
    os << "  \"frobenius_closed_form\": " << json_num(ge.frob_closed_form) << ",\n";
    os << "  \"im_k\": " << json_num(fd.im_k) << "\n";
    os << "}\n";
    std::cout << os.str();
    return 0;
}

int run_asymptotics(const RunConfig& cfg) {
    const AsymptoticReport rep = asymptotic_report(cfg.potential, cfg.mass, cfg.asy_mu,
                                                   cfg.asy_alphas, cfg.asy_nx, cfg.phi_nodes,
                                                   cfg.tol);
    std::ostringstream os;
    write_report_csv(os, rep);
    const std::string path = cfg.out_dir + "/asymptotics.csv";
    write_file(path, os.str());
    std::cout << "alphas: " << rep.rows.size() << ", exponents: phi " << fmt17(rep.exp_phi)
              << ", k " << fmt17(rep.exp_k) << ", gamma " << fmt17(rep.exp_gamma) << ", gpm "
              << fmt17(rep.exp_gpm) << ", vpm " << fmt17(rep.exp_vpm) << " -> " << path
              << "\n";
    return 0;
}

int run_edge_limits(const RunConfig& cfg) {
    const BandStructure bs =
        scan_bands(cfg.potential, cfg.mass, cfg.re_min, cfg.re_max, cfg.scan_points);
    std::ostringstream os;
    os << "edge_index,lambda0,s,kind,gamma_limit,approach_rate,ray,offset,gamma\n";
    const struct {
        const char* name;
        cplx dir;
    } rays[] = {{"+re", {1.0, 0.0}}, {"-re", {-1.0, 0.0}}, {"+im", {0.0, 1.0}},
                {"-im", {0.0, -1.0}}};
    for (std::size_t e = 0; e < bs.edges.size(); ++e) {
        const BandEdge& edge = bs.edges[e];
        for (const auto& ray : rays) {
            for (double t : cfg.edge_offsets) {
                double gamma = std::numeric_limits<double>::quiet_NaN();
                try {
                    const C2 m =
                        monodromy(SpectralPoint{cfg.potential, cfg.mass,
                                                cplx(edge.lambda0, 0.0) + ray.dir * t});
                    if (const auto g = gamma_of_matrix(m)) gamma = *g;
                } catch (const NumericalError&) {
                }
                os << e << ',' << fmt17(edge.lambda0) << ',' << edge.s << ','
                   << (edge.kind == EdgeKind::FullPeriodic ? "full_periodic" : "jordan") << ','
                   << fmt17(edge.gamma_limit) << ',' << fmt17(edge.approach_rate) << ','
                   << ray.name << ',' << fmt17(t) << ',' << fmt17(gamma) << '\n';
            }
        }
    }
    const std::string path = cfg.out_dir + "/edge_limits.csv";
    write_file(path, os.str());
    std::cout << "edges: " << bs.edges.size() << " -> " << path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Floquet band structure and eigenvalue-exclusion maps for the 1-D periodic "
                 "Dirac operator"};
    app.require_subcommand(0, 1);

    std::string config_path;
    bool dump = false;
    int workers_override = 0;
    app.add_option("-c,--config", config_path, "JSON configuration file");
    app.add_flag("--dump-config", dump, "print the normalized configuration and exit");
    app.add_option("--workers", workers_override, "worker thread count override");

    std::string lambda_opt;
    auto* probe = app.add_subcommand("probe", "Floquet data and F_p at one lambda (JSON)");
    probe->add_option("--lambda", lambda_opt, "spectral parameter RE,IM");
    auto* bands_cmd = app.add_subcommand("bands", "band/gap table over the real window (CSV)");
    auto* map_cmd = app.add_subcommand("map", "exclusion grid and level-set contours (CSV/SVG)");
    auto* greens_cmd = app.add_subcommand("greens", "Green's kernel at (x, t) (JSON)");
    double gx = 0.0, gt = 0.0;
    const auto* gx_opt = greens_cmd->add_option("--x", gx, "first argument x");
    const auto* gt_opt = greens_cmd->add_option("--t", gt, "second argument t");
    auto* asy_cmd =
        app.add_subcommand("verify-asymptotics", "large-Im-lambda error decay table (CSV)");
    auto* edge_cmd =
        app.add_subcommand("edge-limits", "Gamma-limit convergence table per band edge (CSV)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config_file(config_path);

        if (const char* env = std::getenv("PDIRAC_WORKERS")) {
            const int w = std::atoi(env);
            if (w >= 1) cfg.workers = w;
        }
        if (const char* env = std::getenv("PDIRAC_OUTDIR")) cfg.out_dir = env;
        if (workers_override >= 1) cfg.workers = workers_override;
        if (!lambda_opt.empty()) {
            std::istringstream ss(lambda_opt);
            double re = 0.0, im = 0.0;
            char comma = 0;
            if (!(ss >> re >> comma >> im) || comma != ',')
                throw ConfigError("--lambda: expected RE,IM");
            cfg.probe_lambda = cplx(re, im);
        }
        if (*gx_opt) cfg.greens_x = gx;
        if (*gt_opt) cfg.greens_t = gt;

        if (dump) {
            std::cout << dump_config(cfg);
            return 0;
        }
        std::filesystem::create_directories(cfg.out_dir);

        if (probe->parsed()) return run_probe(cfg);
        if (bands_cmd->parsed()) return run_bands(cfg);
        if (map_cmd->parsed()) return run_map(cfg);
        if (greens_cmd->parsed()) return run_greens(cfg);
        if (asy_cmd->parsed()) return run_asymptotics(cfg);
        if (edge_cmd->parsed()) return run_edge_limits(cfg);
        std::cerr << "no command given (see --help)\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure at lambda = (" << fmt17(e.lambda().real()) << ", "
                  << fmt17(e.lambda().imag()) << "): " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
