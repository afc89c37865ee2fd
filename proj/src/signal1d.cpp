#include "rshear/signal1d.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "rshear/errors.hpp"
#include "rshear/fft.hpp"
#include "rshear/interp.hpp"

namespace rshear {

namespace {

constexpr double kPi = 3.14159265358979323846;

double meyer_rho(double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); }

// C^inf ramp: 0 for x <= 0, 1 for x >= 1.
double meyer_ramp(double x) {
    double r = meyer_rho(x);
    double q = meyer_rho(1.0 - x);
    return r / (r + q);
}

// Smooth even window supported in 1/2 <= |t| <= 2 whose dyadic dilates tile:
// sum_j meyer_window(2^{-j} t)^2 = 1 for every t != 0.
double meyer_window(double t) {
    double u = std::abs(t);
    if (u <= 0.5 || u >= 2.0) return 0.0;
    if (u <= 1.0) return std::sin(0.5 * kPi * meyer_ramp(2.0 * u - 1.0));
    return std::cos(0.5 * kPi * meyer_ramp(u - 1.0));
}

// integral of meyer_window^2 over R, by a fixed fine Simpson rule so the
// normalization is identical for sampled spectra and the exact evaluator.
double meyer_norm_sq() {
    static const double val = [] {
        const int N = 1 << 16;
        const double lo = 0.5, hi = 2.0, h = (hi - lo) / N;
        double s = 0.0;
        for (int i = 0; i <= N; ++i) {
            double w = (i == 0 || i == N) ? 1.0 : ((i & 1) ? 4.0 : 2.0);
            double y = meyer_window(lo + i * h);
            s += w * y * y;
        }
        return 2.0 * s * h / 3.0;
    }();
    return val;
}

bool parse_interval(const std::string& id, size_t prefix, double* t0,
                    double* t1) {
    return std::sscanf(id.c_str() + prefix, "[%lf,%lf]", t0, t1) == 2;
}

int dc_bin(const UniformGrid& g) {
    for (int m = 0; m < g.n; ++m)
        if (std::abs(g.value(m)) < 0.5 * g.step) return m;
    return -1;
}

} // namespace

Signal1D forward_spectrum(const Signal1D& sig) {
    Fft1d fft(sig.n());
    Signal1D out;
    out.dx = 1.0 / (sig.n() * sig.dx);
    out.values.resize(sig.values.size());
    fft.forward(sig.values.data(), out.values.data(), sig.dx);
    return out;
}

Signal1D inverse_spectrum(const Signal1D& freq) {
    Fft1d fft(freq.n());
    Signal1D out;
    out.dx = 1.0 / (freq.n() * freq.dx);
    out.values.resize(freq.values.size());
    fft.backward(freq.values.data(), out.values.data(), freq.dx);
    return out;
}

cplx Wavelet1D::eval_spectrum(double t) const {
    if (spectral_fn) return spectral_fn(t);
    return cubic_at(spectrum.data(), tau, t);
}

double Wavelet1D::energy() const {
    double s = 0.0;
    for (int m = 0; m < tau.n; ++m) {
        double w = (m == 0 || m == tau.n - 1) ? 0.5 : 1.0;
        s += w * std::norm(spectrum[m]);
    }
    return s * tau.step;
}

Wavelet1D wavelet_from_spectrum(UniformGrid tau, std::vector<cplx> spectrum) {
    if (tau.n != static_cast<int>(spectrum.size()))
        throw std::invalid_argument("spectrum length does not match tau grid");
    Wavelet1D w;
    w.tau = tau;
    w.spectrum = std::move(spectrum);
    return w;
}

Wavelet1D make_wavelet(const std::string& id, const UniformGrid& tau) {
    std::function<cplx(double)> fn;
    if (id == "meyer-annulus") {
        double norm = 1.0 / std::sqrt(meyer_norm_sq());
        fn = [norm](double t) { return cplx(norm * meyer_window(t), 0.0); };
    } else if (id.rfind("indicator:", 0) == 0) {
        double t0, t1;
        if (!parse_interval(id, 10, &t0, &t1))
            throw parse_error("bad indicator wavelet id: " + id);
        fn = [t0, t1](double t) {
            return cplx(t0 <= t && t < t1 ? 1.0 : 0.0, 0.0);
        };
    } else if (id.rfind("indicator-annulus:", 0) == 0) {
        double t0, t1;
        if (!parse_interval(id, 18, &t0, &t1))
            throw parse_error("bad indicator wavelet id: " + id);
        fn = [t0, t1](double t) {
            double u = std::abs(t);
            return cplx(t0 <= u && u < t1 ? 1.0 : 0.0, 0.0);
        };
    } else {
        throw parse_error("unknown wavelet id: " + id);
    }
    Wavelet1D w;
    w.tau = tau;
    w.spectrum.resize(tau.n);
    for (int m = 0; m < tau.n; ++m) w.spectrum[m] = fn(tau.value(m));
    w.spectral_fn = std::move(fn);
    return w;
}

double calderon_constant(Wavelet1D& w) {
    int dc = dc_bin(w.tau);
    double s = 0.0;
    for (int m = 0; m < w.tau.n; ++m) {
        if (m == dc) continue;
        double wt = (m == 0 || m == w.tau.n - 1) ? 0.5 : 1.0;
        s += wt * std::norm(w.spectrum[m]) / std::abs(w.tau.value(m));
    }
    double c = s * w.tau.step;
    w.calderon = c;
    w.admissible = std::isfinite(c) && c > 0.0;
    return c;
}

Eigen::MatrixXcd cwt(const Signal1D& sig, const Wavelet1D& w,
                     const std::vector<double>& b_grid,
                     const std::vector<double>& a_grid) {
    for (double a : a_grid)
        if (a == 0.0) throw std::domain_error("cwt scale a must be nonzero");
    int n = sig.n();
    Fft1d fft(n);
    UniformGrid xg = sig.grid();
    UniformGrid tg = sig.dual_grid();
    std::vector<cplx> F(n), G(n), g(n);
    fft.forward(sig.values.data(), F.data(), sig.dx);
    Eigen::MatrixXcd out(b_grid.size(), a_grid.size());
    for (size_t j = 0; j < a_grid.size(); ++j) {
        double a = a_grid[j];
        double amp = std::sqrt(std::abs(a));
        for (int m = 0; m < n; ++m)
            G[m] = F[m] * amp * std::conj(w.eval_spectrum(a * tg.value(m)));
        fft.backward(G.data(), g.data(), tg.step);
        for (size_t i = 0; i < b_grid.size(); ++i)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                cubic_at(g.data(), xg, b_grid[i]);
    }
    return out;
}

void riesz_multiply(std::vector<cplx>& spectrum, const UniformGrid& tau,
                    double exponent) {
    if (exponent < 0.0)
        throw std::domain_error("riesz multiplier exponent must be >= 0");
    if (tau.n != static_cast<int>(spectrum.size()))
        throw std::invalid_argument("spectrum length does not match tau grid");
    int dc = dc_bin(tau);
    for (int m = 0; m < tau.n; ++m) {
        if (m == dc)
            spectrum[m] = 0.0;
        else
            spectrum[m] *= std::pow(std::abs(tau.value(m)), exponent);
    }
}

Wavelet1D riesz_halfpower(const Wavelet1D& w, double exponent) {
    Wavelet1D out = w;
    riesz_multiply(out.spectrum, out.tau, exponent);
    if (w.spectral_fn) {
        auto base = w.spectral_fn;
        out.spectral_fn = [base, exponent](double t) {
            return t == 0.0 ? cplx(0.0)
                            : base(t) * std::pow(std::abs(t), exponent);
        };
    }
    out.calderon.reset();
    out.admissible = false;
    return out;
}

Signal1D riesz_halfpower(const Signal1D& freq, double exponent) {
    Signal1D out = freq;
    riesz_multiply(out.values, out.grid(), exponent);
    return out;
}

Wavelet1D chi_from_psi1(const Wavelet1D& psi1) {
    double e = psi1.energy();
    if (!(e > 0.0))
        throw admissibility_error("wavelet spectrum has no energy");
    int dc = dc_bin(psi1.tau);
    if (dc >= 0 &&
        std::norm(psi1.spectrum[dc]) * psi1.tau.step > 1e-6 * e)
        throw admissibility_error("wavelet spectrum has mass at the origin");
    double second = 0.0, tail = 0.0;
    int edge = std::max(1, psi1.tau.n / 20);
    for (int m = 0; m < psi1.tau.n; ++m) {
        double t = psi1.tau.value(m);
        double q = t * t * std::norm(psi1.spectrum[m]);
        second += q;
        if (m < edge || m >= psi1.tau.n - edge) tail += q;
    }
    if (second > 0.0 && tail > 0.5 * second)
        throw admissibility_error(
            "spectral second moment dominated by the grid boundary");
    Wavelet1D chi = riesz_halfpower(psi1, 1.0);
    calderon_constant(chi);
    if (!chi.admissible)
        throw admissibility_error("derived wavelet is not admissible");
    return chi;
}

} // namespace rshear
