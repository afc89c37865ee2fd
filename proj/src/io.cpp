#include "rshear/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

#include "rshear/errors.hpp"

namespace rshear {

namespace {

struct Reader {
    std::ifstream f;
    std::string path;
    size_t off = 0;

    explicit Reader(const std::string& p)
        : f(p, std::ios::binary), path(p) {
        if (!f) throw parse_error(p + ": cannot open");
    }
    void bytes(void* dst, size_t n, const char* what) {
        f.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
        if (static_cast<size_t>(f.gcount()) != n)
            throw parse_error(path + ": truncated in " + what + " at byte " +
                              std::to_string(off + static_cast<size_t>(
                                                       std::max<std::streamsize>(
                                                           f.gcount(), 0))));
        off += n;
    }
    std::uint32_t u32(const char* what) {
        std::uint32_t v;
        bytes(&v, 4, what);
        return v;
    }
    std::uint8_t u8(const char* what) {
        std::uint8_t v;
        bytes(&v, 1, what);
        return v;
    }
    double f64(const char* what) {
        double v;
        bytes(&v, 8, what);
        return v;
    }
    void f64s(double* dst, size_t n, const char* what) {
        bytes(dst, 8 * n, what);
    }
    void expect_magic(const char* m) {
        size_t n = std::strlen(m);
        char buf[16] = {};
        bytes(buf, n, "magic");
        if (std::memcmp(buf, m, n) != 0)
            throw parse_error(path + ": bad magic at byte 0 (want " +
                              std::string(m) + ")");
    }
};

struct Writer {
    std::ofstream f;
    std::string path;

    explicit Writer(const std::string& p)
        : f(p, std::ios::binary | std::ios::trunc), path(p) {
        if (!f) throw parse_error(p + ": cannot open for writing");
    }
    void bytes(const void* src, size_t n) {
        f.write(reinterpret_cast<const char*>(src),
                static_cast<std::streamsize>(n));
    }
    void u32(std::uint32_t v) { bytes(&v, 4); }
    void u8(std::uint8_t v) { bytes(&v, 1); }
    void f64(double v) { bytes(&v, 8); }
    void close() {
        f.close();
        if (!f) throw parse_error(path + ": write failed");
    }
};

void check_dims(std::uint32_t n, const char* what, const std::string& path) {
    if (n == 0 || n > (1u << 24))
        throw parse_error(path + ": implausible " + std::string(what) + " " +
                          std::to_string(n));
}

bool all_real(const std::vector<cplx>& v) {
    for (const cplx& z : v)
        if (z.imag() != 0.0) return false;
    return true;
}

UniformGrid grid_from_samples(const std::vector<double>& arr,
                              const std::string& path, const char* what) {
    UniformGrid g;
    g.n = static_cast<int>(arr.size());
    g.start = arr.empty() ? 0.0 : arr[0];
    g.step = arr.size() > 1 ? arr[1] - arr[0] : 1.0;
    double tol = 1e-9 * std::max(1.0, std::abs(g.step));
    for (size_t k = 0; k < arr.size(); ++k)
        if (std::abs(arr[k] - g.value(static_cast<int>(k))) > tol)
            throw parse_error(path + ": non-uniform " + std::string(what) +
                              " grid");
    return g;
}

} // namespace

Image2D read_image_f64(const std::string& path) {
    Reader r(path);
    r.expect_magic("RSIM1");
    std::uint32_t nx = r.u32("nx"), ny = r.u32("ny");
    check_dims(nx, "nx", path);
    check_dims(ny, "ny", path);
    double dx = r.f64("dx");
    if (!(dx > 0.0)) throw parse_error(path + ": non-positive dx");
    Image2D img;
    img.nx = static_cast<int>(nx);
    img.ny = static_cast<int>(ny);
    img.dx = dx;
    size_t n = static_cast<size_t>(nx) * ny;
    std::vector<double> raw(n);
    r.f64s(raw.data(), n, "pixel values");
    img.values.resize(n);
    for (size_t i = 0; i < n; ++i) img.values[i] = raw[i];
    return img;
}

void write_image_f64(const Image2D& img, const std::string& path) {
    Writer w(path);
    w.bytes("RSIM1", 5);
    w.u32(static_cast<std::uint32_t>(img.nx));
    w.u32(static_cast<std::uint32_t>(img.ny));
    w.f64(img.dx);
    for (const cplx& z : img.values) w.f64(z.real());
    w.close();
}

Image2D read_image_pgm(const std::string& path, double dx) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw parse_error(path + ": cannot open");
    size_t off = 0;
    auto token = [&]() -> std::string {
        std::string t;
        int c;
        while ((c = f.get()) != EOF) {
            ++off;
            if (c == '#') {
                while ((c = f.get()) != EOF && ++off && c != '\n') {}
                continue;
            }
            if (std::isspace(c)) {
                if (!t.empty()) return t;
                continue;
            }
            t.push_back(static_cast<char>(c));
        }
        if (t.empty())
            throw parse_error(path + ": truncated header at byte " +
                              std::to_string(off));
        return t;
    };
    if (token() != "P5")
        throw parse_error(path + ": bad magic at byte 0 (want P5)");
    auto num = [&](const char* what) -> long {
        std::string t = token();
        char* end = nullptr;
        long v = std::strtol(t.c_str(), &end, 10);
        if (end == t.c_str() || *end != '\0' || v <= 0)
            throw parse_error(path + ": bad " + std::string(what) +
                              " near byte " + std::to_string(off));
        return v;
    };
    long w = num("width"), h = num("height"), maxval = num("maxval");
    if (maxval != 255)
        throw unsupported_error(path + ": PGM maxval " +
                                std::to_string(maxval) +
                                " (only 255 is handled)");
    if (w > (1 << 20) || h > (1 << 20))
        throw parse_error(path + ": implausible dimensions");
    std::vector<unsigned char> px(static_cast<size_t>(w) * h);
    f.read(reinterpret_cast<char*>(px.data()),
           static_cast<std::streamsize>(px.size()));
    if (static_cast<size_t>(f.gcount()) != px.size())
        throw parse_error(path + ": truncated in pixel data at byte " +
                          std::to_string(off + static_cast<size_t>(
                                                   std::max<std::streamsize>(
                                                       f.gcount(), 0))));

    int nx = std::max(next_pow2(static_cast<int>(w)), 8);
    int ny = std::max(next_pow2(static_cast<int>(h)), 8);
    Image2D img;
    img.nx = nx;
    img.ny = ny;
    img.dx = dx > 0.0 ? dx : 2.0 / std::max(nx, ny);
    img.values.assign(static_cast<size_t>(nx) * ny, cplx{});
    int ox = (nx - static_cast<int>(w)) / 2;
    int oy = (ny - static_cast<int>(h)) / 2;
    for (long iy = 0; iy < h; ++iy)
        for (long ix = 0; ix < w; ++ix)
            img.at(static_cast<int>(ix) + ox, static_cast<int>(iy) + oy) =
                px[static_cast<size_t>(iy) * w + ix] / 255.0;
    return img;
}

Image2D ingest_image(const std::string& path, const std::string& format,
                     double dx) {
    if (format == "pgm") return read_image_pgm(path, dx);
    if (format == "f64raw") return read_image_f64(path);
    throw std::invalid_argument("unknown image format '" + format +
                                "' (use pgm or f64raw)");
}

void write_sinogram(const Sinogram& s, const std::string& path) {
    const UniformGrid& v = s.v_grid;
    const UniformGrid& t = s.t_grid;
    if (v.n % 2 == 0 || std::abs(v.start + v.back()) > 1e-9 * v.step)
        throw std::invalid_argument(
            "RSSG1 stores symmetric inclusive v grids with odd n_v");
    if (std::abs(t.start + (t.n / 2) * t.step) > 1e-9 * t.step)
        throw std::invalid_argument("RSSG1 stores centered t grids");
    Writer w(path);
    w.bytes("RSSG1", 5);
    w.u32(static_cast<std::uint32_t>(v.n));
    w.u32(static_cast<std::uint32_t>(t.n));
    w.f64(v.back());
    w.f64(-t.start);
    w.u8(static_cast<std::uint8_t>(s.stage));
    bool real = all_real(s.values);
    w.u8(real ? 0 : 1);
    if (real) {
        for (const cplx& z : s.values) w.f64(z.real());
    } else {
        for (const cplx& z : s.values) {
            w.f64(z.real());
            w.f64(z.imag());
        }
    }
    w.close();
}

Sinogram read_sinogram(const std::string& path) {
    Reader r(path);
    r.expect_magic("RSSG1");
    std::uint32_t nv = r.u32("n_v"), nt = r.u32("n_t");
    check_dims(nv, "n_v", path);
    check_dims(nt, "n_t", path);
    double vmax = r.f64("vmax"), tmax = r.f64("tmax");
    if (!(vmax > 0.0) || !(tmax > 0.0))
        throw parse_error(path + ": non-positive grid extent");
    std::uint8_t stage = r.u8("stage");
    if (stage > 1)
        throw parse_error(path + ": unknown stage byte " +
                          std::to_string(stage));
    std::uint8_t kind = r.u8("kind");
    if (kind > 1)
        throw parse_error(path + ": unknown kind byte " + std::to_string(kind));
    Sinogram s;
    s.v_grid = UniformGrid::symmetric(vmax, static_cast<int>(nv));
    s.t_grid = UniformGrid::centered(static_cast<int>(nt),
                                     2.0 * tmax / static_cast<int>(nt));
    s.stage = static_cast<SinoStage>(stage);
    size_t n = static_cast<size_t>(nv) * nt;
    s.values.resize(n);
    if (kind == 0) {
        std::vector<double> raw(n);
        r.f64s(raw.data(), n, "values");
        for (size_t i = 0; i < n; ++i) s.values[i] = raw[i];
    } else {
        std::vector<double> raw(2 * n);
        r.f64s(raw.data(), 2 * n, "values");
        for (size_t i = 0; i < n; ++i)
            s.values[i] = cplx{raw[2 * i], raw[2 * i + 1]};
    }
    return s;
}

void sinogram_csv(const Sinogram& s, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw parse_error(path + ": cannot open for writing");
    f << "v,t,value\n";
    char line[96];
    for (int iv = 0; iv < s.v_grid.n; ++iv)
        for (int it = 0; it < s.t_grid.n; ++it) {
            std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g\n",
                          s.v_grid[iv], s.t_grid[it], s.at(iv, it).real());
            f << line;
        }
    if (!f) throw parse_error(path + ": write failed");
}

void write_volume(const CoefficientVolume& vol, const std::string& path,
                  const MotherShearlet* mother) {
    const ShearletLattice& lat = vol.lattice;
    size_t na = lat.a_list.size();
    int ns_max = 0;
    for (const UniformGrid& g : lat.s_grids) ns_max = std::max(ns_max, g.n);
    Writer w(path);
    w.bytes("RSVC1", 5);
    w.u32(static_cast<std::uint32_t>(lat.bx.n));
    w.u32(static_cast<std::uint32_t>(lat.by.n));
    w.u32(static_cast<std::uint32_t>(ns_max));
    w.u32(static_cast<std::uint32_t>(na));
    for (int i = 0; i < lat.bx.n; ++i) w.f64(lat.bx[i]);
    for (int i = 0; i < lat.by.n; ++i) w.f64(lat.by[i]);
    for (double a : lat.a_list) w.f64(a);
    for (double wt : lat.slice_weight) w.f64(wt);
    for (const UniformGrid& g : lat.s_grids)
        w.u32(static_cast<std::uint32_t>(g.n));
    for (const UniformGrid& g : lat.s_grids)
        for (int i = 0; i < ns_max; ++i) w.f64(i < g.n ? g[i] : 0.0);
    for (const cplx& z : vol.values) {
        w.f64(z.real());
        w.f64(z.imag());
    }
    w.close();

    nlohmann::json j;
    j["format"] = "RSVC1";
    if (mother) {
        j["mother"] = mother->id;
        j["gamma"] = mother->gamma;
        j["c_psi"] = mother->c_psi;
    }
    j["lattice"]["a_list"] = lat.a_list;
    j["lattice"]["weights"] = lat.slice_weight;
    std::vector<int> counts;
    std::vector<double> s_steps;
    for (const UniformGrid& g : lat.s_grids) {
        counts.push_back(g.n);
        s_steps.push_back(g.step);
    }
    j["lattice"]["s_counts"] = counts;
    j["lattice"]["s_steps"] = s_steps;
    j["lattice"]["bx"] = {{"start", lat.bx.start},
                          {"step", lat.bx.step},
                          {"n", lat.bx.n}};
    j["lattice"]["by"] = {{"start", lat.by.start},
                          {"step", lat.by.step},
                          {"n", lat.by.n}};
    std::ofstream side(path + ".json", std::ios::trunc);
    if (!side) throw parse_error(path + ".json: cannot open for writing");
    side << j.dump(2) << "\n";
    if (!side) throw parse_error(path + ".json: write failed");
}

CoefficientVolume read_volume(const std::string& path) {
    Reader r(path);
    r.expect_magic("RSVC1");
    std::uint32_t nbx = r.u32("nb_x"), nby = r.u32("nb_y");
    std::uint32_t ns_max = r.u32("n_s"), na = r.u32("n_a");
    check_dims(nbx, "nb_x", path);
    check_dims(nby, "nb_y", path);
    check_dims(ns_max, "n_s", path);
    check_dims(na, "n_a", path);
    ShearletLattice lat;
    std::vector<double> arr(nbx);
    r.f64s(arr.data(), nbx, "bx grid");
    lat.bx = grid_from_samples(arr, path, "bx");
    arr.resize(nby);
    r.f64s(arr.data(), nby, "by grid");
    lat.by = grid_from_samples(arr, path, "by");
    lat.a_list.resize(na);
    r.f64s(lat.a_list.data(), na, "a list");
    for (double a : lat.a_list)
        if (a == 0.0) throw parse_error(path + ": zero scale in a list");
    lat.slice_weight.resize(na);
    r.f64s(lat.slice_weight.data(), na, "weights");
    for (double wt : lat.slice_weight)
        if (!(wt > 0.0))
            throw parse_error(path + ": non-positive slice weight");
    std::vector<std::uint32_t> counts(na);
    r.bytes(counts.data(), 4 * na, "shear counts");
    for (std::uint32_t c : counts)
        if (c == 0 || c > ns_max)
            throw parse_error(path + ": shear count " + std::to_string(c) +
                              " outside [1, " + std::to_string(ns_max) + "]");
    arr.resize(ns_max);
    for (size_t ia = 0; ia < na; ++ia) {
        r.f64s(arr.data(), ns_max, "shear grid");
        std::vector<double> used(arr.begin(), arr.begin() + counts[ia]);
        lat.s_grids.push_back(grid_from_samples(used, path, "shear"));
    }
    CoefficientVolume vol;
    vol.lattice = std::move(lat);
    size_t n = vol.plane_size() * vol.lattice.n_planes();
    std::vector<double> raw(2 * n);
    r.f64s(raw.data(), 2 * n, "coefficients");
    vol.values.resize(n);
    for (size_t i = 0; i < n; ++i)
        vol.values[i] = cplx{raw[2 * i], raw[2 * i + 1]};
    return vol;
}

void write_report(const std::vector<ReportRow>& rows,
                  const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw parse_error(path + ": cannot open for writing");
    f << "metric,value,tolerance,pass\n";
    char line[160];
    for (const ReportRow& row : rows) {
        std::snprintf(line, sizeof line, "%s,%.12g,%.12g,%d\n",
                      row.metric.c_str(), row.value, row.tolerance,
                      row.pass ? 1 : 0);
        f << line;
    }
    if (!f) throw parse_error(path + ": write failed");
}

} // namespace rshear
