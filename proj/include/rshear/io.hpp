#pragma once

#include <string>
#include <vector>

#include "rshear/radon2d.hpp"
#include "rshear/shearlet2d.hpp"

namespace rshear {

/// Raw image container "RSIM1": magic, u32 LE nx, ny, f64 LE dx, then
/// row-major f64 LE values. Real-valued; writing drops imaginary parts
/// (which must be negligible) and a roundtrip is bit-identical.
Image2D read_image_f64(const std::string& path);
void write_image_f64(const Image2D& img, const std::string& path);

/// Binary PGM (P5, maxval 255) mapped to [0,1] and zero-padded, centered, to
/// power-of-two dimensions (at least 8). dx = 0 picks 2/max(nx,ny) so the
/// longer padded side spans [-1, 1).
Image2D read_image_pgm(const std::string& path, double dx = 0.0);

/// format is "pgm" or "f64raw".
Image2D ingest_image(const std::string& path, const std::string& format,
                     double dx = 0.0);

/// Sinogram container "RSSG1": magic, u32 LE n_v, n_t, f64 LE vmax, tmax,
/// stage byte, kind byte (0 = f64 values, 1 = interleaved complex f64),
/// column-major payload. The v grid is symmetric inclusive over
/// [-vmax, vmax] (odd n_v), the t grid centered with start -tmax.
void write_sinogram(const Sinogram& s, const std::string& path);
Sinogram read_sinogram(const std::string& path);
/// Plot export: "v,t,value" rows (real part).
void sinogram_csv(const Sinogram& s, const std::string& path);

/// Coefficient volume container "RSVC1": magic, u32 LE (nb_x, nb_y, n_s_max,
/// n_a), then f64 LE grid arrays (bx, by, a_list, slice weights), u32 LE
/// per-scale shear counts, per-scale shear values zero-padded to n_s_max,
/// and the planes as interleaved complex f64 LE in (a, s) order. A JSON
/// sidecar at <path>.json records mother id, gamma, C_psi and the lattice.
void write_volume(const CoefficientVolume& vol, const std::string& path,
                  const MotherShearlet* mother = nullptr);
CoefficientVolume read_volume(const std::string& path);

struct ReportRow {
    std::string metric;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// "metric,value,tolerance,pass" CSV; pass rendered as 1/0.
void write_report(const std::vector<ReportRow>& rows, const std::string& path);

} // namespace rshear
