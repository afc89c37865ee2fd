#include "rshear/groups.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <stdexcept>

#include "rshear/errors.hpp"

namespace rshear {

namespace {

std::string fmt_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

Eigen::MatrixXd toeplitz_B(int d, const Eigen::VectorXd& s) {
    int m = d - 1;
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(m, m);
    for (int k = 1; k < m; ++k)
        for (int i = 0; i + k < m; ++i) B(i, i + k) = -s(k - 1);
    return B;
}

Eigen::MatrixXd heisenberg_B(const Eigen::VectorXd& u) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(3, 3);
    B(0, 1) = -u(0);
    B(0, 2) = -u(1) - 0.5 * u(0) * u(0);
    return B;
}

std::shared_ptr<const DilationFamily>
make_family(int d, Eigen::VectorXd lambdas, std::string kind, std::string id,
            BMap B) {
    if (d < 2) throw std::invalid_argument("dimension must be >= 2");
    if (lambdas.size() != d - 1)
        throw std::invalid_argument("need d-1 anisotropy exponents");
    auto fam = std::make_shared<DilationFamily>();
    fam->d = d;
    fam->lambdas = std::move(lambdas);
    fam->kind = std::move(kind);
    fam->id = std::move(id);
    fam->B = std::move(B);
    return fam;
}

bool same_family(const DilationFamily& f1, const DilationFamily& f2) {
    if (&f1 == &f2) return true;
    if (f1.kind == "custom" || f2.kind == "custom") return false;
    return f1.kind == f2.kind && f1.d == f2.d && f1.lambdas == f2.lambdas;
}

} // namespace

Eigen::VectorXd DilationFamily::lambda_powers(double a) const {
    double aa = std::abs(a);
    return lambdas.unaryExpr([aa](double l) { return std::pow(aa, l); });
}

std::shared_ptr<const DilationFamily> DilationFamily::standard(int d,
                                                               double gamma) {
    int m = d - 1;
    return make_family(
        d, Eigen::VectorXd::Constant(m, gamma - 1.0), "standard",
        "standard:d=" + std::to_string(d) + ",gamma=" + fmt_num(gamma),
        [m](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(m, m); });
}

std::shared_ptr<const DilationFamily> DilationFamily::toeplitz(int d,
                                                               double lambda1) {
    Eigen::VectorXd l(d - 1);
    for (int k = 0; k < d - 1; ++k) l(k) = (k + 1) * lambda1;
    return make_family(
        d, l, "toeplitz",
        "toeplitz:d=" + std::to_string(d) + ",lambda1=" + fmt_num(lambda1),
        [d](const Eigen::VectorXd& s) { return toeplitz_B(d, s); });
}

std::shared_ptr<const DilationFamily>
DilationFamily::toeplitz_lambdas(int d, const Eigen::VectorXd& lambdas) {
    return make_family(d, lambdas, "toeplitz",
                       "toeplitz:d=" + std::to_string(d) + ",lambda1=" +
                           fmt_num(lambdas.size() ? lambdas(0) : 0.0),
                       [d](const Eigen::VectorXd& s) { return toeplitz_B(d, s); });
}

std::shared_ptr<const DilationFamily> DilationFamily::heisenberg(double lambda) {
    Eigen::Vector3d l(lambda, 2.0 * lambda, 3.0 * lambda);
    return make_family(4, l, "heisenberg",
                       "heisenberg:lambda=" + fmt_num(lambda), heisenberg_B);
}

std::shared_ptr<const DilationFamily>
DilationFamily::custom(int d, const Eigen::VectorXd& lambdas, BMap B) {
    return make_family(d, lambdas, "custom",
                       "custom:d=" + std::to_string(d), std::move(B));
}

std::shared_ptr<const DilationFamily> parse_family(const std::string& id) {
    auto colon = id.find(':');
    if (colon == std::string::npos)
        throw parse_error("family id missing ':': " + id);
    std::string kind = id.substr(0, colon);
    std::map<std::string, double> kv;
    std::string rest = id.substr(colon + 1);
    size_t pos = 0;
    while (pos < rest.size()) {
        size_t comma = rest.find(',', pos);
        if (comma == std::string::npos) comma = rest.size();
        std::string item = rest.substr(pos, comma - pos);
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw parse_error("family id parameter missing '=': " + item);
        try {
            kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw parse_error("family id has non-numeric value: " + item);
        }
        pos = comma + 1;
    }
    auto require = [&](const char* key) {
        auto it = kv.find(key);
        if (it == kv.end())
            throw parse_error("family id missing parameter '" +
                              std::string(key) + "': " + id);
        return it->second;
    };
    if (kind == "standard")
        return DilationFamily::standard(static_cast<int>(require("d")),
                                        require("gamma"));
    if (kind == "toeplitz")
        return DilationFamily::toeplitz(static_cast<int>(require("d")),
                                        require("lambda1"));
    if (kind == "heisenberg")
        return DilationFamily::heisenberg(require("lambda"));
    throw parse_error("unknown family kind: " + kind);
}

GroupElement build_element(std::shared_ptr<const DilationFamily> family,
                           const Eigen::VectorXd& s, double a) {
    if (!family) throw std::invalid_argument("null family");
    if (a == 0.0) throw std::domain_error("scale parameter a must be nonzero");
    if (s.size() != family->d - 1)
        throw std::invalid_argument("shear parameter has wrong dimension");
    int d = family->d;
    Eigen::VectorXd pw = family->lambda_powers(a);
    Eigen::MatrixXd B = family->B(s);
    GroupElement g;
    g.family = std::move(family);
    g.s = s;
    g.a = a;
    g.matrix = Eigen::MatrixXd::Zero(d, d);
    g.matrix(0, 0) = a;
    for (int j = 0; j < d - 1; ++j) g.matrix(0, j + 1) = -a * s(j) * pw(j);
    g.matrix.bottomRightCorner(d - 1, d - 1) = a * B * pw.asDiagonal();
    return g;
}

GroupElement compose(const GroupElement& g1, const GroupElement& g2) {
    if (!same_family(*g1.family, *g2.family))
        throw std::domain_error("cannot compose elements of different families");
    Eigen::VectorXd u =
        g2.s.cwiseQuotient(g1.family->lambda_powers(g1.a));
    Eigen::VectorXd s = u + g1.family->B(u).transpose() * g1.s;
    return build_element(g1.family, s, g1.a * g2.a);
}

GroupElement inverse(const GroupElement& g) {
    Eigen::VectorXd u =
        g.family->B(g.s).transpose().partialPivLu().solve(g.s);
    Eigen::VectorXd s = -g.family->lambda_powers(g.a).cwiseProduct(u);
    return build_element(g.family, s, 1.0 / g.a);
}

DualAction dual_action(const GroupElement& g, const Eigen::VectorXd& v) {
    if (v.size() != g.family->d - 1)
        throw std::invalid_argument("slope has wrong dimension");
    DualAction out;
    out.slope = g.family->lambda_powers(g.a).cwiseProduct(
        g.family->B(g.s).transpose() * v - g.s);
    out.scale = g.a;
    return out;
}

HaarDensity haar_density(const DilationFamily& family, double a) {
    if (a == 0.0) throw std::domain_error("scale parameter a must be nonzero");
    HaarDensity h;
    h.h_density = std::pow(std::abs(a), family.lambda_sum() - 1.0);
    h.g_density = std::pow(std::abs(a), -(family.d + 1.0));
    return h;
}

std::string FamilyReport::summary() const {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "identity=%.3e unipotent=%.3e product=%.3e inverse=%.3e "
                  "compatibility=%.3e => %s",
                  max_identity, max_unipotent, max_product, max_inverse,
                  max_compat, pass ? "pass" : "FAIL");
    return buf;
}

FamilyReport verify_family(const DilationFamily& family, int sample_count,
                           std::uint64_t seed) {
    if (sample_count < 1)
        throw std::invalid_argument("sample_count must be >= 1");
    int m = family.d - 1;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    std::uniform_real_distribution<double> mag(0.5, 2.0);
    auto rand_vec = [&] {
        Eigen::VectorXd v(m);
        for (int i = 0; i < m; ++i) v(i) = coord(rng);
        return v;
    };
    FamilyReport rep;
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    rep.max_identity = (family.B(Eigen::VectorXd::Zero(m)) - I)
                           .cwiseAbs()
                           .maxCoeff();
    for (int it = 0; it < sample_count; ++it) {
        Eigen::VectorXd u = rand_vec(), v = rand_vec();
        double a = mag(rng) * (rng() & 1 ? 1.0 : -1.0);
        Eigen::MatrixXd Bu = family.B(u), Bv = family.B(v);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j <= i; ++j) {
                double want = i == j ? 1.0 : 0.0;
                rep.max_unipotent =
                    std::max(rep.max_unipotent, std::abs(Bu(i, j) - want));
            }
        rep.max_product = std::max(
            rep.max_product,
            (Bu * Bv - family.B(v + Bv.transpose() * u)).cwiseAbs().maxCoeff());
        Eigen::MatrixXd Bu_inv = Bu.partialPivLu().solve(I);
        rep.max_inverse = std::max(
            rep.max_inverse,
            (Bu_inv - family.B(-Bu_inv.transpose() * u)).cwiseAbs().maxCoeff());
        Eigen::VectorXd pw = family.lambda_powers(a);
        Eigen::MatrixXd lhs = pw.asDiagonal() * family.B(u) *
                              pw.cwiseInverse().asDiagonal();
        rep.max_compat =
            std::max(rep.max_compat,
                     (lhs - family.B(u.cwiseQuotient(pw))).cwiseAbs().maxCoeff());
    }
    rep.pass = rep.max_identity <= 1e-10 && rep.max_unipotent <= 1e-10 &&
               rep.max_product <= 1e-10 && rep.max_inverse <= 1e-10 &&
               rep.max_compat <= 1e-10;
    return rep;
}

GroupElement heisenberg_exp(std::shared_ptr<const DilationFamily> family,
                            double q, double p, double t) {
    if (!family || family->kind != "heisenberg")
        throw std::invalid_argument("heisenberg_exp needs a heisenberg family");
    Eigen::Vector3d u(-q, -(p + 0.5 * q * q), -(t + 0.5 * q * p));
    return build_element(std::move(family), u, 1.0);
}

} // namespace rshear
