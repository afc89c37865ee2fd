#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "rshear/radon2d.hpp"
#include "rshear/signal1d.hpp"

namespace rshear {

/// Tensor mother F psi(xi) = F psi_1(xi_1) F psi_2(xi_2 / xi_1) together
/// with everything derived from it. psi2 holds F psi_2 on a slope grid (it
/// *is* the filter phi_2); phi1 = half-order Riesz of psi_1; chi1 carries
/// |tau| F psi_1. Scales act through Lambda(a) = |a|^{gamma-1}.
struct MotherShearlet {
    Wavelet1D psi1;
    Wavelet1D psi2;
    Wavelet1D phi1;
    Wavelet1D chi1;
    /// "<psi1 preset>|<psi2 preset>", recorded in volume sidecars.
    std::string id;
    double gamma = 0.5;
    double c_psi = 0.0;
    /// Both spectra real and even: atoms at -a coincide with atoms at a.
    bool real_even = false;
    /// Numeric support bounds: F psi_1 lives in psi1_lo <= |tau| <= psi1_hi,
    /// F psi_2 in |u| <= psi2_sup.
    double psi1_lo = 0.0, psi1_hi = 0.0, psi2_sup = 0.0;

    cplx spectrum(double xi1, double xi2) const;
};

/// psi1 presets: the Wavelet1D ids ("meyer-annulus", "indicator..." ).
/// psi2 presets: "bump" (C^inf e^{-1/(1-u^2)} on |u|<1, unit L2 norm) or any
/// Wavelet1D id. gamma in (0,1). Construction computes c_psi and rejects
/// non-admissible choices.
MotherShearlet make_mother(const std::string& psi1_preset,
                           const std::string& psi2_preset, double gamma,
                           int psi1_n = 8192, double psi1_taumax = 4.0,
                           int psi2_n = 4096, double psi2_umax = 2.0);

/// Sampling lattice: b on the image grid, signed dyadic scales a = +-2^{-j},
/// per-scale shear grids of step sqrt(|a|)/2 covering |s| <= s_max, and the
/// measure db ds da/|a|^3 folded into one weight per (s,a) slice
/// (da = |a| ln 2 for consecutive dyadic scales).
struct ShearletLattice {
    UniformGrid bx, by;
    std::vector<double> a_list;
    std::vector<UniformGrid> s_grids;     // parallel to a_list
    std::vector<double> slice_weight;     // parallel to a_list

    int n_planes() const;
    int plane_index(int ia, int is) const;
};

ShearletLattice default_lattice(int nx, int ny, double dx, int levels,
                                double s_max = 1.5);

/// S_psi f(b, s, a) sampled on the lattice; plane (ia, is) is an image-shaped
/// row-major array over b.
struct CoefficientVolume {
    ShearletLattice lattice;
    std::vector<cplx> values;

    size_t plane_size() const {
        return static_cast<size_t>(lattice.bx.n) * lattice.by.n;
    }
    cplx* plane(int ia, int is) {
        return values.data() + plane_size() * lattice.plane_index(ia, is);
    }
    const cplx* plane(int ia, int is) const {
        return values.data() + plane_size() * lattice.plane_index(ia, is);
    }
};

/// Scale-dependent slope filter Phi_a(v) = conj(phi_2(-v / |a|^{1-gamma})).
struct ScaleFilter {
    double a = 1.0;
    std::vector<cplx> samples;
};
ScaleFilter scale_filter(const MotherShearlet& m, double a,
                         const UniformGrid& v_grid);

/// Spectrum of S_{0,s,a} psi on the image frequency grid (row-major).
/// Throws aliasing_error when the atom's support leaves the Nyquist box.
std::vector<cplx> atom_spectrum(const MotherShearlet& m, int nx, int ny,
                                double dx, double s, double a);

/// S_{b,s,a} psi sampled on the image grid, via its exact spectrum.
Image2D shear_atom(const MotherShearlet& m, int nx, int ny, double dx,
                   const Eigen::Vector2d& b, double s, double a);

/// <f, S_{b,s,a} psi> for every lattice point: one frequency-domain
/// correlation per (s,a) slice.
CoefficientVolume direct_transform(const Image2D& img, const MotherShearlet& m,
                                   const ShearletLattice& lat);

/// The Radon-domain route, sharing no code with direct_transform: per-column
/// CWT of the raw sinogram with chi_1, translation read at n(v).b by cubic
/// interpolation, then the slope filter integrated over v by trapezoid with
/// prefactor |a|^{(gamma-2)/2}.
CoefficientVolume pipeline_transform(const Sinogram& sino,
                                     const MotherShearlet& m,
                                     const ShearletLattice& lat);

/// Same pipeline driven by phi_1 on a riesz-applied sinogram (prefactor
/// |a|^{(gamma-1)/2}); equal to pipeline_transform on the raw sinogram.
CoefficientVolume pipeline_transform_phi1(const Sinogram& sino_riesz,
                                          const MotherShearlet& m,
                                          const ShearletLattice& lat);

/// Net scale exponent of the Radon-domain pipeline in dimension d: the voice
/// transform contributes (d-1)(gamma-1)/2, and the chi_1 route adds the
/// -(d-1)/2 that trades the half-order multiplier for one power of |tau|.
double pipeline_prefactor_exponent(int d, double gamma,
                                   bool riesz_applied_input);

/// f -> |det h|^{-1/2} f(h^{-1}(x-b)) for the standard group, evaluated
/// spectrally on a zero-padded grid (bicubic in frequency).
Image2D apply_shearlet_rep(const Image2D& img, double gamma,
                           const Eigen::Vector2d& b, double s, double a);

/// Relative L2(v,t) distance between Q(S_{b,s,a} f) sampled on the out grids
/// and (V_{s,a} (x) W_{n(v).b,a}) Q f read off the in grids:
///   rhs(v,t) = |a|^{(gamma-2)/2} Qf(v'', (t - n(v).b)/a),
///   v'' = (v-s)/|a|^{1-gamma},  n(v) = (1, v).
/// Translating f by b moves the line {x1 + v x2 = t} to t - n(v).b, so the
/// offset uses the evaluation slope v, not the source slope v''.
/// The cached overload reuses qin = unitary_Q(img, in_v, in_t).
double intertwine_residual(const Image2D& img, double gamma,
                           const Eigen::Vector2d& b, double s, double a,
                           const UniformGrid& out_v, const UniformGrid& out_t,
                           const UniformGrid& in_v, const UniformGrid& in_t);
double intertwine_residual(const Image2D& img, const Sinogram& qin,
                           double gamma, const Eigen::Vector2d& b, double s,
                           double a, const UniformGrid& out_v,
                           const UniformGrid& out_t);

/// (1/C_psi) sum of coef * S_{b,s,a} psi * weight, accumulated per slice in
/// the frequency domain.
Image2D reconstruct(const CoefficientVolume& vol, const MotherShearlet& m);

/// sum |coef|^2 * weight — the discrete admissibility energy.
double volume_energy(const CoefficientVolume& vol);

double rel_l2_error(const Image2D& test, const Image2D& ref);
double rel_volume_error(const CoefficientVolume& test,
                        const CoefficientVolume& ref);

} // namespace rshear
