#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rshear/groups.hpp"
#include "rshear/io.hpp"
#include "rshear/parallel.hpp"
#include "rshear/phantom.hpp"
#include "rshear/radon2d.hpp"
#include "rshear/shearlet2d.hpp"

namespace {

using namespace rshear;

struct CommonOpts {
    std::string input;
    std::string format = "f64raw";
    std::string phantom;
    int n = 256;
    double dx = 0.0;
    std::string mother = "meyer-annulus";
    std::string psi2 = "bump";
    double gamma = 0.5;
    int levels = 3;
    double vmax = 3.0;
    int nv = 257;
    int nt = 0;
    double smax = 1.5;
    std::string out, report, plot;
    std::uint64_t seed = 1;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--input", o.input, "input image path");
    cmd->add_option("--format", o.format, "image format")
        ->check(CLI::IsMember({"pgm", "f64raw"}));
    cmd->add_option("--phantom", o.phantom, "built-in input")
        ->check(CLI::IsMember({"gauss", "cone-noise"}));
    cmd->add_option("--n", o.n, "phantom side length (power of two)");
    cmd->add_option("--dx", o.dx, "pixel spacing (0 = auto)");
    cmd->add_option("--mother", o.mother, "psi1 preset");
    cmd->add_option("--psi2", o.psi2, "psi2 preset");
    cmd->add_option("--gamma", o.gamma, "anisotropy exponent in (0,1)");
    cmd->add_option("--levels", o.levels, "dyadic scale levels J");
    cmd->add_option("--vmax", o.vmax, "slope half-range");
    cmd->add_option("--nv", o.nv, "slope sample count (odd)");
    cmd->add_option("--nt", o.nt, "offset sample count (0 = auto)");
    cmd->add_option("--smax", o.smax, "shear half-range");
    cmd->add_option("--out", o.out, "binary artifact path");
    cmd->add_option("--report", o.report, "CSV report path");
    cmd->add_option("--plot", o.plot, "CSV plot-data path");
    cmd->add_option("--seed", o.seed, "RNG seed for phantoms");
    cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
}

Image2D load_input(const CommonOpts& o) {
    if (!o.phantom.empty()) {
        if (!o.input.empty())
            throw std::invalid_argument("--input and --phantom are exclusive");
        double dx = o.dx > 0.0 ? o.dx : 4.0 / o.n;
        double R = 0.5 * o.n * dx;
        GaborField f;
        if (o.phantom == "gauss") {
            f = gauss_phantom();
        } else {
            ConeNoiseParams p;
            p.seed = o.seed;
            f = cone_noise(p, R, dx);
        }
        return render(f, o.n, o.n, dx);
    }
    if (o.input.empty())
        throw std::invalid_argument("provide --input or --phantom");
    return ingest_image(o.input, o.format, o.dx);
}

std::pair<UniformGrid, UniformGrid> sino_grids(const Image2D& img,
                                               const CommonOpts& o) {
    auto grids = default_sinogram_grids(img, o.vmax, o.nv);
    if (o.nt > 0) {
        double tmax = -grids.second.start;
        grids.second = UniformGrid::centered(o.nt, 2.0 * tmax / o.nt);
    }
    return grids;
}

int finish(const std::vector<ReportRow>& rows, const CommonOpts& o) {
    if (!o.report.empty()) write_report(rows, o.report);
    bool ok = true;
    for (const ReportRow& r : rows) {
        if (r.tolerance > 0.0)
            std::printf("%-32s %.6g  (tol %.3g)  %s\n", r.metric.c_str(),
                        r.value, r.tolerance, r.pass ? "pass" : "FAIL");
        else
            std::printf("%-32s %.6g  %s\n", r.metric.c_str(), r.value,
                        r.pass ? "pass" : "FAIL");
        ok = ok && r.pass;
    }
    return ok ? 0 : 2;
}

int run_group_check(const std::string& family, int samples, double tol,
                    const CommonOpts& o) {
    auto fam = parse_family(family);
    FamilyReport rep = verify_family(*fam, samples, o.seed);
    std::printf("%s\n", rep.summary().c_str());
    std::vector<ReportRow> rows = {
        {"group_identity_residual", rep.max_identity, tol,
         rep.max_identity <= tol},
        {"group_unipotent_residual", rep.max_unipotent, tol,
         rep.max_unipotent <= tol},
        {"group_product_residual", rep.max_product, tol,
         rep.max_product <= tol},
        {"group_inverse_residual", rep.max_inverse, tol,
         rep.max_inverse <= tol},
        {"group_compat_residual", rep.max_compat, tol, rep.max_compat <= tol},
    };
    return finish(rows, o);
}

int run_radon(const std::string& stage, const CommonOpts& o) {
    Image2D img = load_input(o);
    auto [vg, tg] = sino_grids(img, o);
    Sinogram s = stage == "riesz" ? unitary_Q(img, vg, tg)
                                  : affine_radon(img, vg, tg);
    if (!o.out.empty()) write_sinogram(s, o.out);
    if (!o.plot.empty()) sinogram_csv(s, o.plot);
    std::vector<ReportRow> rows = {
        {"sinogram_l2_norm", l2_norm(s), 0.0, true},
        {"near_horizontal_warning", s.near_horizontal_warning ? 1.0 : 0.0, 0.0,
         !s.near_horizontal_warning},
    };
    return finish(rows, o);
}

int run_slice_check(double tol, const CommonOpts& o) {
    Image2D img = load_input(o);
    auto [vg, tg] = sino_grids(img, o);
    Sinogram s = affine_radon(img, vg, tg);
    if (!o.out.empty()) write_sinogram(s, o.out);
    double r = fourier_slice_residual(img, s);
    std::vector<ReportRow> rows = {
        {"fourier_slice_residual", r, tol, r <= tol},
    };
    return finish(rows, o);
}

int run_shear(const std::string& method, const CommonOpts& o) {
    Image2D img = load_input(o);
    MotherShearlet m = make_mother(o.mother, o.psi2, o.gamma);
    ShearletLattice lat =
        default_lattice(img.nx, img.ny, img.dx, o.levels, o.smax);
    CoefficientVolume vol;
    if (method == "direct") {
        vol = direct_transform(img, m, lat);
    } else {
        auto [vg, tg] = sino_grids(img, o);
        vol = pipeline_transform(affine_radon(img, vg, tg), m, lat);
    }
    if (!o.out.empty()) write_volume(vol, o.out, &m);
    double nf = l2_norm(img);
    double ratio = volume_energy(vol) / (m.c_psi * nf * nf);
    std::vector<ReportRow> rows = {
        {"volume_energy_ratio", ratio, 0.0, true},
    };
    return finish(rows, o);
}

int run_compare(double tol, bool three_way, const CommonOpts& o) {
    Image2D img = load_input(o);
    MotherShearlet m = make_mother(o.mother, o.psi2, o.gamma);
    ShearletLattice lat =
        default_lattice(img.nx, img.ny, img.dx, o.levels, o.smax);
    CoefficientVolume direct = direct_transform(img, m, lat);
    auto [vg, tg] = sino_grids(img, o);
    Sinogram sino = affine_radon(img, vg, tg);
    CoefficientVolume pipe = pipeline_transform(sino, m, lat);
    double err = rel_volume_error(pipe, direct);
    std::vector<ReportRow> rows = {
        {"direct_vs_pipeline", err, tol, err <= tol},
    };
    if (three_way) {
        CoefficientVolume phi =
            pipeline_transform_phi1(apply_riesz(sino), m, lat);
        double e1 = rel_volume_error(phi, pipe);
        double e2 = rel_volume_error(phi, direct);
        rows.push_back({"phi1_vs_pipeline", e1, tol, e1 <= tol});
        rows.push_back({"phi1_vs_direct", e2, tol, e2 <= tol});
    }
    return finish(rows, o);
}

int run_reconstruct(const std::string& method, double tol,
                    const CommonOpts& o) {
    Image2D img = load_input(o);
    MotherShearlet m = make_mother(o.mother, o.psi2, o.gamma);
    ShearletLattice lat =
        default_lattice(img.nx, img.ny, img.dx, o.levels, o.smax);
    CoefficientVolume vol;
    if (method == "direct") {
        vol = direct_transform(img, m, lat);
    } else {
        auto [vg, tg] = sino_grids(img, o);
        vol = pipeline_transform(affine_radon(img, vg, tg), m, lat);
    }
    Image2D rec = reconstruct(vol, m);
    if (!o.out.empty()) write_image_f64(rec, o.out);
    double use_tol = tol > 0.0 ? tol : (method == "direct" ? 5e-2 : 7e-2);
    double err = rel_l2_error(rec, img);
    std::vector<ReportRow> rows = {
        {"reconstruction_rel_l2", err, use_tol, err <= use_tol},
    };
    return finish(rows, o);
}

int run_admissibility(double tol, const CommonOpts& o) {
    MotherShearlet m1 = make_mother(o.mother, o.psi2, o.gamma);
    MotherShearlet m2 =
        make_mother(o.mother, o.psi2, o.gamma, 16384, 4.0, 8192, 2.0);
    double shift = std::abs(m2.c_psi - m1.c_psi);
    std::vector<ReportRow> rows = {
        {"c_psi", m1.c_psi, 0.0, m1.c_psi > 0.0},
        {"c_psi_refinement_shift", shift, tol, shift <= tol},
    };
    return finish(rows, o);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-route shearlet analysis over the affine Radon domain"};
    app.set_config("--config", "", "flat key=value configuration file");
    app.require_subcommand(1);

    CommonOpts o;

    auto* gc = app.add_subcommand("group-check",
                                  "verify shearing-family axioms");
    std::string family;
    int samples = 100;
    double gtol = 1e-10;
    gc->add_option("--family", family,
                   "standard:d=..,gamma=.. | toeplitz:d=..,lambda1=.. | "
                   "heisenberg:lambda=..")
        ->required();
    gc->add_option("--samples", samples, "random samples per axiom");
    gc->add_option("--tol", gtol, "max acceptable residual");
    add_common(gc, o);

    auto* rd = app.add_subcommand("radon", "affine Radon transform to RSSG1");
    std::string stage = "raw";
    rd->add_option("--stage", stage, "raw | riesz")
        ->check(CLI::IsMember({"raw", "riesz"}));
    add_common(rd, o);

    auto* sc = app.add_subcommand(
        "slice-check", "Fourier-slice consistency of the Radon transform");
    double tol_slice = 1e-2;
    sc->add_option("--tol-slice", tol_slice, "max residual");
    add_common(sc, o);

    auto* sh = app.add_subcommand("shear",
                                  "shearlet coefficient volume to RSVC1");
    std::string sh_method = "direct";
    sh->add_option("--method", sh_method, "direct | radon")
        ->check(CLI::IsMember({"direct", "radon"}));
    add_common(sh, o);

    auto* cp = app.add_subcommand(
        "compare", "direct vs Radon-pipeline coefficient agreement");
    double tol_compare = 1e-2;
    bool three_way = false;
    cp->add_option("--tol-compare", tol_compare, "max relative L2 error");
    cp->add_flag("--three-way", three_way,
                 "also run the phi1 route on the riesz-applied sinogram");
    add_common(cp, o);

    auto* rc = app.add_subcommand("reconstruct",
                                  "invert a coefficient volume back to an "
                                  "image");
    std::string rc_method = "direct";
    double tol_recon = 0.0;
    rc->add_option("--method", rc_method, "direct | radon")
        ->check(CLI::IsMember({"direct", "radon"}));
    rc->add_option("--tol-recon", tol_recon,
                   "max relative L2 error (0 = per-method default)");
    add_common(rc, o);

    auto* ad = app.add_subcommand("admissibility",
                                  "C_psi quadrature and refinement stability");
    double tol_stab = 1e-3;
    ad->add_option("--tol-stability", tol_stab,
                   "max C_psi shift under 2x grid refinement");
    add_common(ad, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc_code = app.exit(e);
        return rc_code == 0 ? 0 : 1;
    }

    try {
        set_threads(o.threads);
        if (gc->parsed()) return run_group_check(family, samples, gtol, o);
        if (rd->parsed()) return run_radon(stage, o);
        if (sc->parsed()) return run_slice_check(tol_slice, o);
        if (sh->parsed()) return run_shear(sh_method, o);
        if (cp->parsed()) return run_compare(tol_compare, three_way, o);
        if (rc->parsed()) return run_reconstruct(rc_method, tol_recon, o);
        if (ad->parsed()) return run_admissibility(tol_stab, o);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
