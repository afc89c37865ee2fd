#include "rshear/phantom.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace rshear {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSigmas = 5.5;
} // namespace

cplx GaborAtom::eval(const Eigen::Vector2d& x) const {
    Eigen::Vector2d d = x - c;
    double q = 0.5 * d.dot(P * d);
    double ph = 2.0 * kPi * om.dot(d);
    return amp * std::exp(-q) * cplx(std::cos(ph), std::sin(ph));
}

cplx GaborAtom::spectrum(const Eigen::Vector2d& xi) const {
    Eigen::Vector2d d = xi - om;
    double q = 2.0 * kPi * kPi * d.dot(P.inverse() * d);
    double ph = -2.0 * kPi * xi.dot(c);
    double mag = 2.0 * kPi / std::sqrt(P.determinant());
    return amp * mag * std::exp(-q) * cplx(std::cos(ph), std::sin(ph));
}

cplx GaborField::eval(const Eigen::Vector2d& x) const {
    cplx s(0.0);
    for (const auto& a : atoms) s += a.eval(x);
    return s;
}

cplx GaborField::spectrum(const Eigen::Vector2d& xi) const {
    cplx s(0.0);
    for (const auto& a : atoms) s += a.spectrum(xi);
    return s;
}

GaborField GaborField::transformed(const Eigen::Matrix2d& h,
                                   const Eigen::Vector2d& b) const {
    Eigen::Matrix2d hi = h.inverse();
    double det = std::abs(h.determinant());
    GaborField out;
    out.atoms.reserve(atoms.size());
    for (const auto& a : atoms) {
        GaborAtom t;
        t.amp = a.amp / std::sqrt(det);
        t.c = h * a.c + b;
        t.P = hi.transpose() * a.P * hi;
        t.om = hi.transpose() * a.om;
        out.atoms.push_back(t);
    }
    return out;
}

double GaborField::bandwidth() const {
    double r = 0.0;
    for (const auto& a : atoms) {
        double lmax = a.P.selfadjointView<Eigen::Lower>()
                          .eigenvalues()
                          .maxCoeff();
        r = std::max(r, a.om.norm() + kSigmas * std::sqrt(lmax) / (2.0 * kPi));
    }
    return r;
}

double GaborField::support_radius() const {
    double r = 0.0;
    for (const auto& a : atoms) {
        double lmin = a.P.selfadjointView<Eigen::Lower>()
                          .eigenvalues()
                          .minCoeff();
        r = std::max(r, a.c.norm() + kSigmas / std::sqrt(lmin));
    }
    return r;
}

GaborField gauss_phantom() {
    GaborField f;
    GaborAtom a;
    a.P = 2.0 * kPi * Eigen::Matrix2d::Identity();
    f.atoms.push_back(a);
    return f;
}

GaborField cone_noise(const ConeNoiseParams& p, double R, double dx) {
    if (p.n_atoms < 2 || p.n_atoms % 2 != 0)
        throw std::invalid_argument("cone_noise needs an even atom count");
    double nyq = 1.0 / (2.0 * dx);
    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    GaborField f;
    f.atoms.reserve(p.n_atoms);
    for (int i = 0; i < p.n_atoms / 2; ++i) {
        double sigma = p.sigma_rel * R * (0.8 + 0.4 * unit(rng));
        GaborAtom a;
        a.P = Eigen::Matrix2d::Identity() / (sigma * sigma);
        a.c = Eigen::Vector2d(sym(rng), sym(rng)) * (p.center_rel * R);
        double om1 = nyq * (p.om1_lo + (p.om1_hi - p.om1_lo) * unit(rng));
        a.om = Eigen::Vector2d(om1, om1 * p.slope_max * sym(rng));
        double ph = 2.0 * kPi * unit(rng);
        a.amp = cplx(std::cos(ph), std::sin(ph));
        GaborAtom conj = a;
        conj.amp = std::conj(a.amp);
        conj.om = -a.om;
        f.atoms.push_back(a);
        f.atoms.push_back(conj);
    }
    return f;
}

Image2D render(const GaborField& f, int nx, int ny, double dx) {
    Image2D img;
    img.nx = nx;
    img.ny = ny;
    img.dx = dx;
    img.values.resize(static_cast<size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy) {
        double y = (iy - ny / 2) * dx;
        for (int ix = 0; ix < nx; ++ix)
            img.values[static_cast<size_t>(iy) * nx + ix] =
                f.eval({(ix - nx / 2) * dx, y});
    }
    double frac = f.bandwidth() * 2.0 * dx;
    if (frac <= 1.0) img.band_limit = frac;
    return img;
}

} // namespace rshear
