#include "rshear/shearlet2d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>

#include "rshear/errors.hpp"
#include "rshear/fft.hpp"
#include "rshear/interp.hpp"
#include "rshear/parallel.hpp"

namespace rshear {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Per-worker FFT workspaces so slices can run concurrently (results are
/// deterministic regardless of thread count: writes are disjoint and the
/// arithmetic per slice is identical).
Fft1d& local_fft1d(int n) {
    thread_local std::unique_ptr<Fft1d> f;
    if (!f || f->size() != n) f = std::make_unique<Fft1d>(n);
    return *f;
}

Fft2d& local_fft2d(int nx, int ny) {
    thread_local std::unique_ptr<Fft2d> f;
    if (!f || f->nx() != nx || f->ny() != ny)
        f = std::make_unique<Fft2d>(nx, ny);
    return *f;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

/// Numeric support radius of the stored samples: largest |x| carrying more
/// than 1e-12 of the peak, widened by one grid step.
void support_scan(const Wavelet1D& w, double& lo, double& hi) {
    double peak = 0.0;
    for (const cplx& z : w.spectrum) peak = std::max(peak, std::abs(z));
    double thr = 1e-12 * peak;
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    for (int k = 0; k < w.tau.n; ++k) {
        if (std::abs(w.spectrum[static_cast<size_t>(k)]) > thr) {
            double t = std::abs(w.tau[k]);
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
    }
    if (hi == 0.0) { lo = 0.0; return; }
    hi += w.tau.step;
    lo = std::max(0.0, lo - w.tau.step);
}

void check_contained(const Wavelet1D& w, const char* name) {
    double peak = 0.0;
    for (const cplx& z : w.spectrum) peak = std::max(peak, std::abs(z));
    if (std::abs(w.eval_spectrum(w.tau.start)) > 1e-12 * peak ||
        std::abs(w.eval_spectrum(w.tau.back())) > 1e-12 * peak)
        throw coverage_error(std::string(name) +
                             " support reaches the edge of its sample grid");
}

bool real_and_even(const Wavelet1D& w) {
    double peak = 0.0;
    for (const cplx& z : w.spectrum) peak = std::max(peak, std::abs(z));
    if (peak == 0.0) return true;
    double tol = 1e-12 * peak;
    for (int k = 0; k < w.tau.n; ++k) {
        cplx p = w.eval_spectrum(w.tau[k]);
        cplx q = w.eval_spectrum(-w.tau[k]);
        if (std::abs(p.imag()) > tol || std::abs(p - q) > tol) return false;
    }
    return true;
}

Wavelet1D bump_wavelet(const UniformGrid& u) {
    std::vector<cplx> vals(static_cast<size_t>(u.n));
    for (int k = 0; k < u.n; ++k) {
        double x = u[k];
        vals[static_cast<size_t>(k)] =
            std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
    }
    Wavelet1D w = wavelet_from_spectrum(u, std::move(vals));
    double norm = 1.0 / std::sqrt(w.energy());
    for (cplx& z : w.spectrum) z *= norm;
    w.spectral_fn = [norm](double x) -> cplx {
        return std::abs(x) < 1.0 ? norm * std::exp(-1.0 / (1.0 - x * x)) : 0.0;
    };
    return w;
}

} // namespace

cplx MotherShearlet::spectrum(double xi1, double xi2) const {
    if (xi1 == 0.0) return cplx{};
    return psi1.eval_spectrum(xi1) * psi2.eval_spectrum(xi2 / xi1);
}

MotherShearlet make_mother(const std::string& psi1_preset,
                           const std::string& psi2_preset, double gamma,
                           int psi1_n, double psi1_taumax, int psi2_n,
                           double psi2_umax) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma must lie in (0, 1)");
    MotherShearlet m;
    m.id = psi1_preset + "|" + psi2_preset;
    m.gamma = gamma;
    m.psi1 = make_wavelet(
        psi1_preset, UniformGrid::centered(psi1_n, 2.0 * psi1_taumax / psi1_n));
    UniformGrid ug = UniformGrid::centered(psi2_n, 2.0 * psi2_umax / psi2_n);
    m.psi2 = psi2_preset == "bump" ? bump_wavelet(ug)
                                   : make_wavelet(psi2_preset, ug);
    check_contained(m.psi1, "psi1");
    check_contained(m.psi2, "psi2");
    m.chi1 = chi_from_psi1(m.psi1);
    m.phi1 = riesz_halfpower(m.psi1, 0.5);
    m.c_psi = calderon_constant(m.psi1) * m.psi2.energy();
    double lo2;
    support_scan(m.psi1, m.psi1_lo, m.psi1_hi);
    support_scan(m.psi2, lo2, m.psi2_sup);
    m.real_even = real_and_even(m.psi1) && real_and_even(m.psi2);
    return m;
}

int ShearletLattice::n_planes() const {
    int p = 0;
    for (const UniformGrid& g : s_grids) p += g.n;
    return p;
}

int ShearletLattice::plane_index(int ia, int is) const {
    int p = 0;
    for (int k = 0; k < ia; ++k) p += s_grids[static_cast<size_t>(k)].n;
    return p + is;
}

ShearletLattice default_lattice(int nx, int ny, double dx, int levels,
                                double s_max) {
    if (levels < 0) throw std::invalid_argument("levels must be >= 0");
    if (s_max <= 0.0) throw std::invalid_argument("s_max must be positive");
    ShearletLattice lat;
    lat.bx = UniformGrid::centered(nx, dx);
    lat.by = UniformGrid::centered(ny, dx);
    const double ln2 = std::log(2.0);
    for (int j = 0; j <= levels; ++j) {
        double a = std::ldexp(1.0, -j);
        double step = 0.5 * std::sqrt(a);
        int side = static_cast<int>(std::floor(s_max / step + 1e-9));
        UniformGrid sg{-side * step, step, 2 * side + 1};
        double w = dx * dx * step * ln2 / (a * a);
        for (double sign : {1.0, -1.0}) {
            lat.a_list.push_back(sign * a);
            lat.s_grids.push_back(sg);
            lat.slice_weight.push_back(w);
        }
    }
    return lat;
}

ScaleFilter scale_filter(const MotherShearlet& m, double a,
                         const UniformGrid& v_grid) {
    if (a == 0.0) throw std::domain_error("scale a must be nonzero");
    double ag = std::pow(std::abs(a), 1.0 - m.gamma);
    ScaleFilter f;
    f.a = a;
    f.samples.resize(static_cast<size_t>(v_grid.n));
    for (int i = 0; i < v_grid.n; ++i)
        f.samples[static_cast<size_t>(i)] =
            std::conj(m.psi2.eval_spectrum(-v_grid[i] / ag));
    return f;
}

namespace {

/// Frequency support box of S_{.,s,a} psi: |xi_1| <= xi1_hi and
/// |xi_2| <= |xi_1| (|s| + sup |a|^{1-gamma}).
void check_alias(const MotherShearlet& m, double dx, double s, double a) {
    double aa = std::abs(a);
    double xi1 = m.psi1_hi / aa;
    double xi2 = xi1 * (std::abs(s) + m.psi2_sup * std::pow(aa, 1.0 - m.gamma));
    double nyq = 0.5 / dx;
    if (xi1 > nyq * (1.0 + 1e-9) || xi2 > nyq * (1.0 + 1e-9))
        throw aliasing_error(
            fmt("atom at s=%g, a=%g occupies frequencies up to ", s, a) +
            fmt("(%g, %g) beyond the Nyquist box %g", xi1, xi2, nyq));
}

void check_centered_pow2(const UniformGrid& g, const char* name) {
    if (!is_pow2(g.n) || g.n < 8 ||
        std::abs(g.start + (g.n / 2) * g.step) > 1e-9 * g.step)
        throw std::invalid_argument(std::string(name) +
                                    " must be a centered power-of-two grid");
}

bool same_grid(const UniformGrid& a, const UniformGrid& b) {
    return a.n == b.n && a.start == b.start && a.step == b.step;
}

bool mirror_slice(const MotherShearlet& m, const ShearletLattice& lat,
                  size_t ia) {
    return m.real_even && ia > 0 &&
           lat.a_list[ia] == -lat.a_list[ia - 1] &&
           same_grid(lat.s_grids[ia], lat.s_grids[ia - 1]);
}

CoefficientVolume empty_volume(const ShearletLattice& lat) {
    CoefficientVolume vol;
    vol.lattice = lat;
    vol.values.assign(static_cast<size_t>(lat.n_planes()) * vol.plane_size(),
                      cplx{});
    return vol;
}

} // namespace

std::vector<cplx> atom_spectrum(const MotherShearlet& m, int nx, int ny,
                                double dx, double s, double a) {
    if (a == 0.0) throw std::domain_error("scale a must be nonzero");
    check_alias(m, dx, s, a);
    double aa = std::abs(a);
    double lam = std::pow(aa, m.gamma - 1.0);
    double pw = std::pow(aa, 0.5 * (1.0 + m.gamma));
    UniformGrid fx = UniformGrid::centered(nx, 1.0 / (nx * dx));
    UniformGrid fy = UniformGrid::centered(ny, 1.0 / (ny * dx));
    std::vector<cplx> out(static_cast<size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy) {
        double f2 = fy[iy];
        cplx* row = out.data() + static_cast<size_t>(iy) * nx;
        for (int ix = 0; ix < nx; ++ix) {
            double f1 = fx[ix];
            row[ix] = f1 == 0.0
                          ? cplx{}
                          : pw * m.psi1.eval_spectrum(a * f1) *
                                m.psi2.eval_spectrum(lam * (f2 / f1 - s));
        }
    }
    return out;
}

Image2D shear_atom(const MotherShearlet& m, int nx, int ny, double dx,
                   const Eigen::Vector2d& b, double s, double a) {
    std::vector<cplx> spec = atom_spectrum(m, nx, ny, dx, s, a);
    UniformGrid fx = UniformGrid::centered(nx, 1.0 / (nx * dx));
    UniformGrid fy = UniformGrid::centered(ny, 1.0 / (ny * dx));
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            double ph = -2.0 * kPi * (b[0] * fx[ix] + b[1] * fy[iy]);
            spec[static_cast<size_t>(iy) * nx + ix] *=
                cplx{std::cos(ph), std::sin(ph)};
        }
    Image2D img;
    img.nx = nx;
    img.ny = ny;
    img.dx = dx;
    img.values.resize(spec.size());
    Fft2d fft(nx, ny);
    fft.backward(spec.data(), img.values.data(), fx.step * fy.step);
    double aa = std::abs(a);
    double frac = 2.0 * dx * (m.psi1_hi / aa) *
                  std::max(1.0, std::abs(s) +
                                    m.psi2_sup * std::pow(aa, 1.0 - m.gamma));
    if (frac <= 1.0) img.band_limit = frac;
    return img;
}

CoefficientVolume direct_transform(const Image2D& img, const MotherShearlet& m,
                                   const ShearletLattice& lat) {
    if (!same_grid(lat.bx, img.x_grid()) || !same_grid(lat.by, img.y_grid()))
        throw std::invalid_argument(
            "lattice translation grids must match the image grid");
    std::vector<cplx> F = image_spectrum(img);
    CoefficientVolume vol = empty_volume(lat);
    double dxi = 1.0 / (img.nx * img.dx) / (img.ny * img.dx);
    for (size_t ia = 0; ia < lat.a_list.size(); ++ia) {
        int ns = lat.s_grids[ia].n;
        if (mirror_slice(m, lat, ia)) {
            std::copy(vol.plane(static_cast<int>(ia) - 1, 0),
                      vol.plane(static_cast<int>(ia) - 1, 0) +
                          vol.plane_size() * ns,
                      vol.plane(static_cast<int>(ia), 0));
            continue;
        }
        parallel_for(0, ns, [&](int is) {
            std::vector<cplx> A = atom_spectrum(m, img.nx, img.ny, img.dx,
                                                lat.s_grids[ia][is],
                                                lat.a_list[ia]);
            for (size_t i = 0; i < F.size(); ++i) A[i] = F[i] * std::conj(A[i]);
            local_fft2d(img.nx, img.ny)
                .backward(A.data(), vol.plane(static_cast<int>(ia), is), dxi);
        });
    }
    return vol;
}

double pipeline_prefactor_exponent(int d, double gamma,
                                   bool riesz_applied_input) {
    if (d < 2) throw std::invalid_argument("dimension must be >= 2");
    double e = 0.5 * (d - 1) * (gamma - 1.0);
    if (!riesz_applied_input) e -= 0.5 * (d - 1);
    return e;
}

namespace {

CoefficientVolume pipeline_core(const Sinogram& sino, const MotherShearlet& m,
                                const ShearletLattice& lat,
                                const Wavelet1D& wav, double pref_exp,
                                SinoStage need, const char* need_name) {
    if (sino.stage != need)
        throw stage_error(std::string("pipeline expects a ") + need_name +
                          " sinogram");
    const UniformGrid& vg = sino.v_grid;
    const UniformGrid& tg = sino.t_grid;
    check_centered_pow2(tg, "sinogram t grid");
    int nv = vg.n, nt = tg.n;
    int nbx = lat.bx.n, nby = lat.by.n;
    double vmax = std::min(-vg.start, vg.back());
    double vabs = std::max(-vg.start, vg.back());
    double tmax = std::min(-tg.start, tg.back());

    double bxmax = std::max(std::abs(lat.bx.start), std::abs(lat.bx.back()));
    double bymax = std::max(std::abs(lat.by.start), std::abs(lat.by.back()));
    if (bxmax + vabs * bymax > tmax + 1e-9)
        throw coverage_error(
            fmt("translation reads need |t| up to %g but the sinogram stops "
                "at %g",
                bxmax + vabs * bymax, tmax));
    for (size_t ia = 0; ia < lat.a_list.size(); ++ia) {
        double aa = std::abs(lat.a_list[ia]);
        const UniformGrid& sg = lat.s_grids[ia];
        double smax = std::max(std::abs(sg.start), std::abs(sg.back()));
        double reach = smax + m.psi2_sup * std::pow(aa, 1.0 - m.gamma);
        if (reach > vmax + 1e-9)
            throw coverage_error(
                fmt("scale a=%g filters slopes out to |v|=%g but the "
                    "sinogram stops at %g",
                    lat.a_list[ia], reach, vmax));
        if (m.psi1_hi / aa > 0.5 / tg.step * (1.0 + 1e-9))
            throw aliasing_error(
                fmt("scale a=%g needs t-frequencies up to %g beyond the "
                    "sinogram Nyquist %g",
                    lat.a_list[ia], m.psi1_hi / aa, 0.5 / tg.step));
    }

    UniformGrid taug = UniformGrid::centered(nt, 1.0 / (nt * tg.step));
    std::vector<cplx> colspec(static_cast<size_t>(nv) * nt);
    parallel_for(0, nv, [&](int iv) {
        local_fft1d(nt).forward(
            sino.values.data() + static_cast<size_t>(iv) * nt,
            colspec.data() + static_cast<size_t>(iv) * nt, tg.step);
    });

    CoefficientVolume vol = empty_volume(lat);
    std::vector<cplx> G(static_cast<size_t>(nv) * nt);
    for (size_t ia = 0; ia < lat.a_list.size(); ++ia) {
        int ns = lat.s_grids[ia].n;
        if (mirror_slice(m, lat, ia)) {
            std::copy(vol.plane(static_cast<int>(ia) - 1, 0),
                      vol.plane(static_cast<int>(ia) - 1, 0) +
                          vol.plane_size() * ns,
                      vol.plane(static_cast<int>(ia), 0));
            continue;
        }
        double a = lat.a_list[ia];
        double aa = std::abs(a);
        double ag = std::pow(aa, 1.0 - m.gamma);
        double amp = std::sqrt(aa);
        parallel_for(0, nv, [&](int iv) {
            std::vector<cplx> spec(static_cast<size_t>(nt));
            const cplx* cs = colspec.data() + static_cast<size_t>(iv) * nt;
            for (int k = 0; k < nt; ++k)
                spec[static_cast<size_t>(k)] =
                    cs[k] * amp * std::conj(wav.eval_spectrum(a * taug[k]));
            local_fft1d(nt).backward(
                spec.data(), G.data() + static_cast<size_t>(iv) * nt,
                taug.step);
        });
        Eigen::MatrixXcd W(ns, nv);
        double pw = std::pow(aa, pref_exp);
        for (int is = 0; is < ns; ++is)
            for (int iv = 0; iv < nv; ++iv) {
                double trap = (iv == 0 || iv == nv - 1) ? 0.5 : 1.0;
                W(is, iv) = std::conj(m.psi2.eval_spectrum(
                                (vg[iv] - lat.s_grids[ia][is]) / ag)) *
                            (vg.step * trap * pw);
            }
        parallel_for(0, nby, [&](int iby) {
            Eigen::MatrixXcd M(nv, nbx), C;
            double y = lat.by[iby];
            for (int iv = 0; iv < nv; ++iv) {
                const cplx* row = G.data() + static_cast<size_t>(iv) * nt;
                double x0 = lat.bx.start + vg[iv] * y;
                for (int ibx = 0; ibx < nbx; ++ibx)
                    M(iv, ibx) = cubic_at(row, nt, tg.start, tg.step,
                                          x0 + lat.bx.step * ibx);
            }
            C.noalias() = W * M;
            for (int is = 0; is < ns; ++is) {
                cplx* plane = vol.plane(static_cast<int>(ia), is) +
                              static_cast<size_t>(iby) * nbx;
                for (int ibx = 0; ibx < nbx; ++ibx) plane[ibx] = C(is, ibx);
            }
        });
    }
    return vol;
}

} // namespace

CoefficientVolume pipeline_transform(const Sinogram& sino,
                                     const MotherShearlet& m,
                                     const ShearletLattice& lat) {
    return pipeline_core(sino, m, lat, m.chi1,
                         pipeline_prefactor_exponent(2, m.gamma, false),
                         SinoStage::raw, "raw");
}

CoefficientVolume pipeline_transform_phi1(const Sinogram& sino_riesz,
                                          const MotherShearlet& m,
                                          const ShearletLattice& lat) {
    return pipeline_core(sino_riesz, m, lat, m.phi1,
                         pipeline_prefactor_exponent(2, m.gamma, true),
                         SinoStage::riesz, "riesz-applied");
}

Image2D apply_shearlet_rep(const Image2D& img, double gamma,
                           const Eigen::Vector2d& b, double s, double a) {
    if (a == 0.0) throw std::domain_error("scale a must be nonzero");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma must lie in (0, 1)");
    if (s == 0.0 && a == 1.0 && b[0] == 0.0 && b[1] == 0.0) return img;

    int nx = img.nx, ny = img.ny;
    int mpad = next_pow2(8 * std::max(nx, ny));
    std::vector<cplx> pad(static_cast<size_t>(mpad) * mpad, cplx{});
    int ox = (mpad - nx) / 2, oy = (mpad - ny) / 2;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            pad[static_cast<size_t>(iy + oy) * mpad + (ix + ox)] =
                img.at(ix, iy);
    {
        Fft2d big(mpad, mpad);
        big.forward(pad.data(), pad.data(), img.dx * img.dx);
    }
    double dqf = 1.0 / (mpad * img.dx);
    double fstart = -(mpad / 2) * dqf;

    double aa = std::abs(a);
    double lam = std::pow(aa, gamma - 1.0);
    double h12 = -s * a * lam, h22 = a * lam;
    double amp = std::pow(aa, 0.5 * (1.0 + gamma));
    UniformGrid fx = img.fx_grid(), fy = img.fy_grid();
    std::vector<cplx> S(static_cast<size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy) {
        double f2 = fy[iy];
        for (int ix = 0; ix < nx; ++ix) {
            double f1 = fx[ix];
            double w1 = a * f1;
            double w2 = h12 * f1 + h22 * f2;
            cplx val = bicubic_at(pad.data(), mpad, mpad, mpad, fstart, dqf,
                                  fstart, dqf, w2, w1);
            double ph = -2.0 * kPi * (b[0] * f1 + b[1] * f2);
            S[static_cast<size_t>(iy) * nx + ix] =
                amp * cplx{std::cos(ph), std::sin(ph)} * val;
        }
    }
    Image2D out;
    out.nx = nx;
    out.ny = ny;
    out.dx = img.dx;
    out.values.resize(S.size());
    Fft2d fft(nx, ny);
    fft.backward(S.data(), out.values.data(), fx.step * fy.step);
    return out;
}

double intertwine_residual(const Image2D& img, const Sinogram& qin,
                           double gamma, const Eigen::Vector2d& b, double s,
                           double a, const UniformGrid& out_v,
                           const UniformGrid& out_t) {
    if (qin.stage != SinoStage::riesz)
        throw stage_error("intertwining needs the riesz-applied transform Qf");
    if (a == 0.0) throw std::domain_error("scale a must be nonzero");
    check_centered_pow2(qin.t_grid, "cached sinogram t grid");

    bool trivial = s == 0.0 && a == 1.0 && b[0] == 0.0 && b[1] == 0.0;
    Image2D g = trivial ? img : apply_shearlet_rep(img, gamma, b, s, a);
    Sinogram lhs = unitary_Q(g, out_v, out_t);

    const UniformGrid& iv = qin.v_grid;
    const UniformGrid& itg = qin.t_grid;
    double aa = std::abs(a);
    double ag = std::pow(aa, 1.0 - gamma);
    double pref = std::pow(aa, 0.5 * gamma - 1.0);

    double vlo = (out_v.start - s) / ag;
    double vhi = (out_v.back() - s) / ag;
    if (vlo < iv.start - 1e-9 || vhi > iv.back() + 1e-9)
        throw coverage_error(
            fmt("slope reads cover [%g, %g] but the cached grid spans ", vlo,
                vhi) +
            fmt("[%g, %g]", iv.start, iv.back()));
    double beta_a = b[0] + out_v.start * b[1];
    double beta_b = b[0] + out_v.back() * b[1];
    double beta_lo = std::min(beta_a, beta_b);
    double beta_hi = std::max(beta_a, beta_b);
    double corners[4] = {(out_t.start - beta_lo) / a,
                         (out_t.start - beta_hi) / a,
                         (out_t.back() - beta_lo) / a,
                         (out_t.back() - beta_hi) / a};
    double read_lo = *std::min_element(corners, corners + 4);
    double read_hi = *std::max_element(corners, corners + 4);
    if (read_lo < itg.start - 1e-9 || read_hi > itg.back() + 1e-9)
        throw coverage_error(
            fmt("offset reads span [%g, %g] but the cached grid spans ",
                read_lo, read_hi) +
            fmt("[%g, %g]", itg.start, itg.back()));

    const int kUp = 8;
    int nti = itg.n, ntu = kUp * nti;
    Fft1d fin(nti), fup(ntu);
    UniformGrid ut = UniformGrid::centered(ntu, itg.step / kUp);
    double dtau = 1.0 / (nti * itg.step);
    std::vector<cplx> col(nti), spec(nti), specpad(ntu), up(ntu);
    std::vector<cplx> rhs(static_cast<size_t>(out_v.n) * out_t.n);

    for (int ivo = 0; ivo < out_v.n; ++ivo) {
        double vpp = (out_v[ivo] - s) / ag;
        double fi = iv.to_index(vpp);
        double ri = std::round(fi);
        if (std::abs(fi - ri) < 1e-9 && ri >= 0 && ri < iv.n) {
            const cplx* src =
                qin.values.data() + static_cast<size_t>(ri) * nti;
            std::copy(src, src + nti, col.begin());
        } else {
            int i0 = static_cast<int>(std::floor(fi));
            double w[4];
            detail::cr_weights(fi - i0, w);
            std::fill(col.begin(), col.end(), cplx{});
            for (int k = 0; k < 4; ++k) {
                int j = i0 - 1 + k;
                if (j < 0 || j >= iv.n) continue;
                const cplx* src =
                    qin.values.data() + static_cast<size_t>(j) * nti;
                for (int it = 0; it < nti; ++it) col[static_cast<size_t>(it)] += src[it] * w[k];
            }
        }
        // The offset shift uses the evaluation slope: translating f by b
        // moves the line {x1 + v x2 = t} to t - <b, (1, v)>.
        double beta = b[0] + out_v[ivo] * b[1];
        cplx* dst = rhs.data() + static_cast<size_t>(ivo) * out_t.n;
        if (a == 1.0 && beta == 0.0 && same_grid(itg, out_t)) {
            for (int it = 0; it < out_t.n; ++it)
                dst[it] = pref * col[static_cast<size_t>(it)];
            continue;
        }
        fin.forward(col.data(), spec.data(), itg.step);
        std::fill(specpad.begin(), specpad.end(), cplx{});
        std::copy(spec.begin(), spec.end(),
                  specpad.begin() + (ntu - nti) / 2);
        fup.backward(specpad.data(), up.data(), dtau);
        for (int it = 0; it < out_t.n; ++it) {
            double tpp = (out_t[it] - beta) / a;
            dst[it] = pref * cubic_at(up.data(), ntu, ut.start, ut.step, tpp);
        }
    }

    double num = 0.0, d1 = 0.0, d2 = 0.0;
    for (size_t i = 0; i < rhs.size(); ++i) {
        num += std::norm(lhs.values[i] - rhs[i]);
        d1 += std::norm(lhs.values[i]);
        d2 += std::norm(rhs[i]);
    }
    double den = std::max(d1, d2);
    return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

double intertwine_residual(const Image2D& img, double gamma,
                           const Eigen::Vector2d& b, double s, double a,
                           const UniformGrid& out_v, const UniformGrid& out_t,
                           const UniformGrid& in_v, const UniformGrid& in_t) {
    Sinogram qin = unitary_Q(img, in_v, in_t);
    return intertwine_residual(img, qin, gamma, b, s, a, out_v, out_t);
}

Image2D reconstruct(const CoefficientVolume& vol, const MotherShearlet& m) {
    const ShearletLattice& lat = vol.lattice;
    int nx = lat.bx.n, ny = lat.by.n;
    double dx = lat.bx.step;
    if (m.c_psi <= 0.0)
        throw admissibility_error("reconstruction needs a positive C_psi");
    Fft2d fft(nx, ny);
    std::vector<cplx> acc(static_cast<size_t>(nx) * ny, cplx{});
    std::vector<cplx> buf(acc.size());
    for (size_t ia = 0; ia < lat.a_list.size(); ++ia)
        for (int is = 0; is < lat.s_grids[ia].n; ++is) {
            fft.forward(vol.plane(static_cast<int>(ia), is), buf.data(), 1.0);
            std::vector<cplx> A =
                atom_spectrum(m, nx, ny, dx, lat.s_grids[ia][is],
                              lat.a_list[ia]);
            double w = lat.slice_weight[ia];
            for (size_t i = 0; i < acc.size(); ++i) acc[i] += w * A[i] * buf[i];
        }
    Image2D out;
    out.nx = nx;
    out.ny = ny;
    out.dx = dx;
    out.values.resize(acc.size());
    double dxi = 1.0 / (nx * dx) / (ny * dx);
    fft.backward(acc.data(), out.values.data(), dxi / m.c_psi);
    return out;
}

double volume_energy(const CoefficientVolume& vol) {
    const ShearletLattice& lat = vol.lattice;
    double e = 0.0;
    for (size_t ia = 0; ia < lat.a_list.size(); ++ia)
        for (int is = 0; is < lat.s_grids[ia].n; ++is) {
            const cplx* p = vol.plane(static_cast<int>(ia), is);
            double s2 = 0.0;
            for (size_t i = 0; i < vol.plane_size(); ++i) s2 += std::norm(p[i]);
            e += lat.slice_weight[ia] * s2;
        }
    return e;
}

double rel_l2_error(const Image2D& test, const Image2D& ref) {
    if (test.nx != ref.nx || test.ny != ref.ny)
        throw std::invalid_argument("image shapes differ");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < ref.values.size(); ++i) {
        num += std::norm(test.values[i] - ref.values[i]);
        den += std::norm(ref.values[i]);
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

double rel_volume_error(const CoefficientVolume& test,
                        const CoefficientVolume& ref) {
    if (test.values.size() != ref.values.size() ||
        test.lattice.a_list.size() != ref.lattice.a_list.size())
        throw std::invalid_argument("volume shapes differ");
    const ShearletLattice& lat = ref.lattice;
    double num = 0.0, den = 0.0;
    for (size_t ia = 0; ia < lat.a_list.size(); ++ia)
        for (int is = 0; is < lat.s_grids[ia].n; ++is) {
            const cplx* p = test.plane(static_cast<int>(ia), is);
            const cplx* q = ref.plane(static_cast<int>(ia), is);
            double w = lat.slice_weight[ia];
            for (size_t i = 0; i < ref.plane_size(); ++i) {
                num += w * std::norm(p[i] - q[i]);
                den += w * std::norm(q[i]);
            }
        }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

} // namespace rshear
