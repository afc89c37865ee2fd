#include "rshear/radon2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rshear/errors.hpp"
#include "rshear/fft.hpp"
#include "rshear/interp.hpp"
#include "rshear/parallel.hpp"
#include "rshear/signal1d.hpp"

namespace rshear {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_image(const Image2D& img) {
    if (img.nx < 8 || img.ny < 8 || !is_pow2(img.nx) || !is_pow2(img.ny))
        throw std::invalid_argument("image sides must be powers of two >= 8");
    if (!(img.dx > 0.0)) throw std::invalid_argument("image dx must be > 0");
    if (img.values.size() != static_cast<size_t>(img.nx) * img.ny)
        throw std::invalid_argument("image buffer size mismatch");
}

void check_centered(const UniformGrid& g, const char* what) {
    if (g.n < 8 || !is_pow2(g.n))
        throw std::invalid_argument(std::string(what) +
                                    " grid must be a centered power-of-two grid");
    if (std::abs(g.start + (g.n / 2) * g.step) > 1e-9 * g.step)
        throw std::invalid_argument(std::string(what) +
                                    " grid must be centered (t_k = (k-n/2) dt)");
}

double grid_absmax(const UniformGrid& g) {
    return std::max(std::abs(g.start), std::abs(g.back()));
}

/// Linear interpolation in theta and u, with (theta + pi, u) ~ (theta, -u)
/// wrapping when the grid spans a full period.
cplx polar_sample(const PolarSinogram& p, double theta, double u) {
    const UniformGrid& g = p.theta_grid;
    int n = g.n;
    int nt = p.t_grid.n;
    double fj = (theta - g.start) / g.step;
    bool full = std::abs(n * g.step - kPi) < 1e-9;
    bool flip0 = false;
    if (full) {
        double w = std::floor(fj / n);
        fj -= w * n;
        if (fj >= n) {
            fj -= n;
            w += 1.0;
        }
        if (std::llround(w) & 1) flip0 = !flip0;
    } else if (fj < -1e-9 || fj > n - 1 + 1e-9) {
        throw coverage_error("angle outside the sampled polar range");
    }
    fj = std::clamp(fj, 0.0, static_cast<double>(n) - 1e-12);
    int j0 = static_cast<int>(fj);
    double al = fj - j0;
    int j1 = j0 + 1;
    bool flip1 = flip0;
    if (j1 >= n) {
        if (full) {
            j1 = 0;
            flip1 = !flip0;
        } else {
            j1 = j0;
            al = 0.0;
        }
    }
    auto tap = [&](int j, bool fl) {
        return lerp_at(p.values.data() + static_cast<size_t>(j) * nt, nt,
                       p.t_grid.start, p.t_grid.step, fl ? -u : u);
    };
    return tap(j0, flip0) * (1.0 - al) + tap(j1, flip1) * al;
}

} // namespace

std::pair<UniformGrid, UniformGrid>
default_sinogram_grids(const Image2D& img, double vmax, int n_v) {
    check_image(img);
    double R = std::max(img.nx, img.ny) / 2 * img.dx;
    double range = 1.1 * R * (1.0 + vmax);
    int n_t = next_pow2(2 * std::max(img.nx, img.ny));
    return {UniformGrid::symmetric(vmax, n_v),
            UniformGrid::centered(n_t, 2.0 * range / n_t)};
}

UniformGrid default_polar_theta_grid(int n) {
    if (n < 2) throw std::invalid_argument("need at least 2 polar angles");
    return {0.5 * kPi / n, kPi / n, n};
}

Sinogram affine_radon(const Image2D& img, const UniformGrid& v_grid,
                      const UniformGrid& t_grid) {
    check_image(img);
    check_centered(t_grid, "t");
    double Rx = img.nx / 2 * img.dx;
    double Ry = img.ny / 2 * img.dx;
    double need = Rx + grid_absmax(v_grid) * Ry;
    if (-t_grid.start + 1e-9 < need - t_grid.step ||
        t_grid.back() + t_grid.step + 1e-9 < need)
        throw coverage_error("t range cannot hold every line meeting the "
                             "image at the requested slopes");
    Sinogram out;
    out.v_grid = v_grid;
    out.t_grid = t_grid;
    out.stage = SinoStage::raw;
    out.values.assign(static_cast<size_t>(v_grid.n) * t_grid.n, cplx(0.0));
    int nx = img.nx, ny = img.ny, nt = t_grid.n;
    double x0 = img.x_grid().start;
    parallel_for(0, v_grid.n, [&](int iv) {
        double v = v_grid.value(iv);
        cplx* col = out.values.data() + static_cast<size_t>(iv) * nt;
        for (int iy = 0; iy < ny; ++iy) {
            double y = (iy - ny / 2) * img.dx;
            const cplx* row = img.values.data() + static_cast<size_t>(iy) * nx;
            double fi = (t_grid.start - v * y - x0) / img.dx;
            double dfi = t_grid.step / img.dx;
            for (int it = 0; it < nt; ++it, fi += dfi) {
                if (fi < 0.0 || fi > nx - 1) continue;
                int i0 = static_cast<int>(fi);
                if (i0 >= nx - 1) {
                    col[it] += row[nx - 1];
                } else {
                    double u = fi - i0;
                    col[it] += row[i0] * (1.0 - u) + row[i0 + 1] * u;
                }
            }
        }
        for (int it = 0; it < nt; ++it) col[it] *= img.dx;
    });
    return out;
}

Sinogram polar_to_affine(const PolarSinogram& p, const UniformGrid& v_grid,
                         const UniformGrid& t_grid) {
    Sinogram out;
    out.v_grid = v_grid;
    out.t_grid = t_grid;
    out.stage = SinoStage::raw;
    out.values.resize(static_cast<size_t>(v_grid.n) * t_grid.n);
    for (int iv = 0; iv < v_grid.n; ++iv) {
        double v = v_grid.value(iv);
        double theta = std::atan(v);
        double sc = std::sqrt(1.0 + v * v);
        cplx* col = out.values.data() + static_cast<size_t>(iv) * t_grid.n;
        for (int it = 0; it < t_grid.n; ++it)
            col[it] = polar_sample(p, theta, t_grid.value(it) / sc) / sc;
    }
    return out;
}

PolarSinogram affine_to_polar(const Sinogram& s, const UniformGrid& theta_grid,
                              const UniformGrid& u_grid) {
    PolarSinogram out;
    out.theta_grid = theta_grid;
    out.t_grid = u_grid;
    out.values.resize(static_cast<size_t>(theta_grid.n) * u_grid.n);
    double vmax = grid_absmax(s.v_grid);
    for (int j = 0; j < theta_grid.n; ++j) {
        double theta = theta_grid.value(j);
        double c = std::cos(theta), si = std::sin(theta);
        if (std::abs(c) * vmax < std::abs(si))
            throw coverage_error("angle maps to a slope outside the sampled "
                                 "sinogram");
        double v = si / c;
        double sc = std::sqrt(1.0 + v * v);
        double sgn = c >= 0.0 ? 1.0 : -1.0;
        cplx* col = out.values.data() + static_cast<size_t>(j) * u_grid.n;
        for (int i = 0; i < u_grid.n; ++i)
            col[i] = sc * bilinear_at(s.values.data(), s.v_grid.n, s.t_grid.n,
                                      s.t_grid.n, s.v_grid.start, s.v_grid.step,
                                      s.t_grid.start, s.t_grid.step, v,
                                      sgn * sc * u_grid.value(i));
    }
    return out;
}

double fourier_slice_residual(const Image2D& img, const Sinogram& sino) {
    check_image(img);
    if (sino.stage != SinoStage::raw)
        throw stage_error("slice residual needs a raw sinogram");
    check_centered(sino.t_grid, "t");
    int m = std::max(next_pow2(4 * std::max(img.nx, img.ny)), 2048);
    std::vector<cplx> pad(static_cast<size_t>(m) * m, cplx(0.0));
    int offx = (m - img.nx) / 2, offy = (m - img.ny) / 2;
    for (int iy = 0; iy < img.ny; ++iy)
        for (int ix = 0; ix < img.nx; ++ix)
            pad[static_cast<size_t>(iy + offy) * m + ix + offx] =
                img.at(ix, iy);
    {
        Fft2d fft2(m, m);
        fft2.forward(pad.data(), pad.data(), img.dx * img.dx);
    }
    UniformGrid fg = UniformGrid::centered(m, 1.0 / (m * img.dx));
    int nt = sino.t_grid.n;
    Fft1d fft(nt);
    UniformGrid tau = UniformGrid::centered(nt, 1.0 / (nt * sino.t_grid.step));
    std::vector<cplx> A(nt);
    std::vector<double> d2(sino.v_grid.n), n2(sino.v_grid.n);
    double peak = 0.0;
    for (int iv = 0; iv < sino.v_grid.n; ++iv) {
        double v = sino.v_grid.value(iv);
        fft.forward(sino.values.data() + static_cast<size_t>(iv) * nt, A.data(),
                    sino.t_grid.step);
        double dd = 0.0, aa = 0.0, bb = 0.0;
        for (int mth = 0; mth < nt; ++mth) {
            double tv = tau.value(mth);
            cplx B = bicubic_at(pad.data(), m, m, m, fg.start, fg.step,
                                fg.start, fg.step, tv * v, tv);
            dd += std::norm(A[mth] - B);
            aa += std::norm(A[mth]);
            bb += std::norm(B);
        }
        d2[iv] = dd;
        n2[iv] = std::max(aa, bb);
        peak = std::max(peak, n2[iv]);
    }
    // Distances are taken relative to the strongest slice column: slices the
    // spectrum barely meets would otherwise divide rounding noise by zero.
    if (peak == 0.0) return 0.0;
    double worst = 0.0;
    for (int iv = 0; iv < sino.v_grid.n; ++iv)
        worst = std::max(worst, std::sqrt(d2[iv] / peak));
    return worst;
}

Sinogram apply_riesz(const Sinogram& sino) {
    if (sino.stage != SinoStage::raw)
        throw stage_error("half-order multiplier already applied");
    check_centered(sino.t_grid, "t");
    Sinogram out = sino;
    out.stage = SinoStage::riesz;
    int nt = sino.t_grid.n;
    Fft1d fft(nt);
    UniformGrid tau = UniformGrid::centered(nt, 1.0 / (nt * sino.t_grid.step));
    std::vector<cplx> spec(nt);
    for (int iv = 0; iv < sino.v_grid.n; ++iv) {
        cplx* col = out.values.data() + static_cast<size_t>(iv) * nt;
        fft.forward(col, spec.data(), sino.t_grid.step);
        riesz_multiply(spec, tau, 0.5);
        fft.backward(spec.data(), col, tau.step);
    }
    return out;
}

Sinogram unitary_Q(const Image2D& img, const UniformGrid& v_grid,
                   const UniformGrid& t_grid) {
    std::vector<cplx> spec = image_spectrum(img);
    double total = 0.0, near = 0.0;
    for (int iy = 0; iy < img.ny; ++iy)
        for (int ix = 0; ix < img.nx; ++ix) {
            double e = std::norm(spec[static_cast<size_t>(iy) * img.nx + ix]);
            total += e;
            if (std::abs(ix - img.nx / 2) < 2) near += e;
        }
    Sinogram q = apply_riesz(affine_radon(img, v_grid, t_grid));
    q.near_horizontal_warning = total > 0.0 && near >= 0.1 * total;
    return q;
}

std::vector<cplx> image_spectrum(const Image2D& img) {
    check_image(img);
    std::vector<cplx> out(img.values.size());
    Fft2d fft(img.nx, img.ny);
    fft.forward(img.values.data(), out.data(), img.dx * img.dx);
    return out;
}

double spectral_energy_outside(const Image2D& img, double nyquist_fraction) {
    std::vector<cplx> spec = image_spectrum(img);
    UniformGrid fx = img.fx_grid(), fy = img.fy_grid();
    double r2 = nyquist_fraction / (2.0 * img.dx);
    r2 *= r2;
    double total = 0.0, outside = 0.0;
    for (int iy = 0; iy < img.ny; ++iy)
        for (int ix = 0; ix < img.nx; ++ix) {
            double e = std::norm(spec[static_cast<size_t>(iy) * img.nx + ix]);
            total += e;
            double gx = fx.value(ix), gy = fy.value(iy);
            if (gx * gx + gy * gy > r2) outside += e;
        }
    return total > 0.0 ? outside / total : 0.0;
}

double l2_norm(const Image2D& img) {
    double s = 0.0;
    for (const cplx& z : img.values) s += std::norm(z);
    return std::sqrt(s) * img.dx;
}

double l2_norm(const Sinogram& s) {
    double acc = 0.0;
    for (const cplx& z : s.values) acc += std::norm(z);
    return std::sqrt(acc * s.v_grid.step * s.t_grid.step);
}

cplx l2_inner(const Sinogram& s1, const Sinogram& s2) {
    if (s1.values.size() != s2.values.size())
        throw std::invalid_argument("sinogram shapes differ");
    cplx acc(0.0);
    for (size_t i = 0; i < s1.values.size(); ++i)
        acc += s1.values[i] * std::conj(s2.values[i]);
    return acc * (s1.v_grid.step * s1.t_grid.step);
}

cplx l2_inner(const Image2D& f, const Image2D& g) {
    if (f.values.size() != g.values.size())
        throw std::invalid_argument("image shapes differ");
    cplx acc(0.0);
    for (size_t i = 0; i < f.values.size(); ++i)
        acc += f.values[i] * std::conj(g.values[i]);
    return acc * (f.dx * f.dx);
}

} // namespace rshear
