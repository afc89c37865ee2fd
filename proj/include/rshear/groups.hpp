#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

namespace rshear {

/// Shearing map: u in R^{d-1} -> unipotent upper-triangular (d-1)x(d-1).
using BMap = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// A generalized shearlet dilation family in dimension d: anisotropy
/// exponents lambda_1..lambda_{d-1} (Lambda(a) = diag(|a|^{lambda_k})) and a
/// shearing map B. Immutable after construction; shared by elements.
struct DilationFamily {
    int d = 2;
    Eigen::VectorXd lambdas;
    std::string kind;   // standard | toeplitz | heisenberg | custom
    std::string id;     // canonical string id (see parse_family)
    BMap B;

    double lambda_sum() const { return lambdas.sum(); }
    /// Elementwise |a|^{lambda_k}, the diagonal of Lambda(a).
    Eigen::VectorXd lambda_powers(double a) const;

    /// B == identity, lambda_k = gamma - 1 for every k.
    static std::shared_ptr<const DilationFamily> standard(int d, double gamma);
    /// Unipotent upper-triangular Toeplitz B driven by s_1..s_{d-2},
    /// lambda_k = k*lambda1 (the only exponents compatible with this B).
    static std::shared_ptr<const DilationFamily> toeplitz(int d, double lambda1);
    /// Toeplitz B with free exponents (compatibility not enforced; use
    /// verify_family to see it fail when lambdas are not k*lambda1).
    static std::shared_ptr<const DilationFamily>
    toeplitz_lambdas(int d, const Eigen::VectorXd& lambdas);
    /// d=4 family whose shearing part is isomorphic to the Heisenberg group;
    /// exponents (lambda, 2*lambda, 3*lambda).
    static std::shared_ptr<const DilationFamily> heisenberg(double lambda);
    static std::shared_ptr<const DilationFamily>
    custom(int d, const Eigen::VectorXd& lambdas, BMap B);
};

/// Parse "standard:d=<d>,gamma=<g>", "toeplitz:d=<d>,lambda1=<l>",
/// "heisenberg:lambda=<l>". Throws parse_error on malformed ids.
std::shared_ptr<const DilationFamily> parse_family(const std::string& id);

/// Group element (s, a), s in R^{d-1}, a != 0, with the cached matrix
///   h_{s,a} = a * [[1, -s^T Lambda(a)], [0, B(s) Lambda(a)]].
struct GroupElement {
    std::shared_ptr<const DilationFamily> family;
    Eigen::VectorXd s;
    double a = 1.0;
    Eigen::MatrixXd matrix;
};

GroupElement build_element(std::shared_ptr<const DilationFamily> family,
                           const Eigen::VectorXd& s, double a);

/// (s,a)(s',a') = (Lambda(a)^{-1} s' + B(Lambda(a)^{-1} s')^T s, a a').
GroupElement compose(const GroupElement& g1, const GroupElement& g2);

/// (s,a)^{-1} = (-Lambda(a) B(s)^{-T} s, 1/a).
GroupElement inverse(const GroupElement& g);

/// Action of h^T on frequency directions n(v) = (1, v):
/// h_{s,a}^T n(v) = scale * n(slope) with slope = Lambda(a)(B(s)^T v - s)
/// and scale = a. Under composition the slope maps chain left-to-right:
/// slope(g1 g2, v) = slope(g2, slope(g1, v)).
struct DualAction {
    Eigen::VectorXd slope;
    double scale = 1.0;
};
DualAction dual_action(const GroupElement& g, const Eigen::VectorXd& v);

/// h_density: left Haar density of the dilation group in ds da.
/// g_density: left Haar density of the full affine group in db ds da.
struct HaarDensity {
    double h_density = 1.0;  // |a|^{lambda_sum - 1}
    double g_density = 1.0;  // |a|^{-(d+1)}
};
HaarDensity haar_density(const DilationFamily& family, double a);

/// Randomized sweep of the shearing-map axioms. pass iff every residual
/// is <= 1e-10.
struct FamilyReport {
    double max_identity = 0.0;   // |B(0) - I|
    double max_unipotent = 0.0;  // departure from unipotent upper-triangular
    double max_product = 0.0;    // |B(u)B(v) - B(v + B(v)^T u)|
    double max_inverse = 0.0;    // |B(u)^{-1} - B(-B(u)^{-T} u)|
    double max_compat = 0.0;     // |Lambda(a)B(s)Lambda(a)^{-1} - B(Lambda(a)^{-1}s)|
    bool pass = false;
    std::string summary() const;
};
FamilyReport verify_family(const DilationFamily& family, int sample_count,
                           std::uint64_t seed);

/// exp of the nilpotent generator X(q,p,t) (X^3 = 0) of the Heisenberg
/// family's shearing group, as the element with parameters
/// (-q, -(p + q^2/2), -(t + q p/2), a=1).
GroupElement heisenberg_exp(std::shared_ptr<const DilationFamily> family,
                            double q, double p, double t);

} // namespace rshear
