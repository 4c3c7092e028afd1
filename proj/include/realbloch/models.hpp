#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "realbloch/geometry.hpp"

namespace rb {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

// Pauli matrices.
Mat2 pauli(int i);  // i = 1, 2, 3

/* Irreducible representation of the complex Clifford algebra on C^4,
 * pinned to the tensor products
 *   S0 = s1 x s3, S1 = s2 x s3, S2 = 1 x s1, S3 = 1 x s2, S4 = s3 x s3.
 * Satisfies Si Sj + Sj Si = 2 delta_ij, conj(Sj) = (-1)^j Sj,
 * S0 S1 S2 S3 S4 = -1, Tr Sj = 0, Tr(Si Sj) = 4 delta_ij. */
const std::array<Mat4, 5>& clifford_rep();

// Real polynomial in kappa_1..kappa_4 as a sum of monomials.
struct Monomial {
    std::array<int, 4> exponents{};
    double coeff = 0;
};

class Polynomial4 {
  public:
    Polynomial4() = default;
    explicit Polynomial4(std::vector<Monomial> terms) : terms_(std::move(terms)) {}
    double eval(const double kappa[4]) const;
    Polynomial4 partial(int axis) const;
    const std::vector<Monomial>& terms() const { return terms_; }

  private:
    std::vector<Monomial> terms_;
};

// One rational component P(kappa) / (1 + |kappa|^2)^p with exact
// quotient-rule gradient (the numerator partials are precomputed).
class RationalComponent {
  public:
    RationalComponent() = default;
    RationalComponent(Polynomial4 numerator, int power);
    double eval(const double kappa[4]) const;
    void eval_grad(const double kappa[4], double& value, double grad[4]) const;

    const Polynomial4& numerator() const { return num_; }
    int power() const { return pow_; }

  private:
    Polynomial4 num_;
    std::array<Polynomial4, 4> dnum_;
    int pow_ = 0;
};

/* Five rational coefficient functions F_0..F_4 defining a Dirac-like
 * model H(kappa) = sum_j F_j(kappa) Sigma_j, with a parity signature
 * s_j in {+1,-1} (0 when a component is neither even nor odd). */
class CoefficientMap {
  public:
    CoefficientMap() = default;
    CoefficientMap(std::array<RationalComponent, 5> components,
                   std::array<int, 5> declared_parity);

    void eval(const double kappa[4], double f_out[5]) const;
    // f_out, plus df_out[j][a] = d F_j / d kappa_a (exact).
    void eval_grad(const double kappa[4], double f_out[5],
                   double df_out[5][4]) const;
    double q(const double kappa[4]) const;  // sum of F_j^2

    const std::array<int, 5>& parity() const { return parity_; }
    const RationalComponent& component(int j) const { return comps_[j]; }

    // Largest |F_j(-kappa) - s_j F_j(kappa)| over random samples.
    double parity_deviation(int samples = 256, unsigned seed = 7) const;

  private:
    std::array<RationalComponent, 5> comps_;
    std::array<int, 5> parity_{};
};

// The chart-form ansatz: F0 = (r^2-1)/(r^2+1), F1 = 2(k1+k2)/(r^2+1),
// F2 = 4(k1 k2 - k3 k4)/(r^2+1)^2, F3 = 2(k3+k4)/(r^2+1),
// F4 = 4(k1 k4 + k2 k3)/(r^2+1)^2; parity (+,-,+,-,+).
CoefficientMap standard_ansatz();

Mat4 dirac_hamiltonian(const CoefficientMap& f, const double kappa[4]);

// Rank-2 projector P(k) = (1 + sum_j k_j Sigma_j) / 2 for unit k in R^5.
Mat4 hopf_projector(const double k[5]);

// Spectral band projector (1 +- H/sqrt(Q))/2 of a coefficient map.
Mat4 band_projector(const CoefficientMap& f, const double kappa[4], int band_sign);

enum class SymmetryClass { AI, AII };

struct SymmetryChoice {
    // J in {1, Sigma_0, .., Sigma_4}; -1 encodes the identity.
    int j_index = -1;

    Mat4 matrix() const;
    // AI when J conj(J) = +1, AII when -1.
    SymmetryClass declared_class() const;
    std::string name() const;
    static SymmetryChoice from_name(const std::string& name);
};

struct SymmetryReport {
    double max_deviation = 0;          // of J H(k) J* - conj(H(-k)) over the grid
    std::array<int, 5> expected_parity{};
    std::array<int, 5> declared_parity{};
    bool parity_match = false;
    SymmetryClass symmetry_class = SymmetryClass::AI;
};

SymmetryReport check_symmetry(const CoefficientMap& f, const SymmetryChoice& choice,
                              const Grid& grid);

// SU(2)-valued map on S^3 with optional exact ambient gradient.
struct SU2Map {
    std::function<Mat2(const double k[4])> value;
    // d(value)/d k_a in ambient R^4 coordinates; empty -> caller uses FD.
    std::function<void(const double k[4], Mat2 dvalue[4])> ambient_grad;
};

// Quaternion identification of S^3 with SU(2):
//   iota(k) = k4 1 + i (k1 s1 + k2 s2 + k3 s3).
Mat2 su2_from_s3(const double k[4]);
void s3_from_su2(const Mat2& u, double k_out[4]);

// k -> iota(k)^n; degree n.
SU2Map su2_power_map(int n);

// The equator restriction of the degree-2 ansatz map, as S^3 -> SU(2).
SU2Map equator_ansatz_su2_map();

// Continuous map S^4 -> S^4 evaluated pointwise.
struct SphereMap {
    std::function<void(const double k_in[5], double k_out[5])> value;
};

SphereMap identity_sphere_map();

// phi_{F,+} (or the minus branch): k -> +-(F_0(k),..,F_4(k))/sqrt(Q(k))
// with the sphere-form ansatz F0 = k0, F1 = k1+k2, F2 = k1 k2 - k3 k4,
// F3 = k3+k4, F4 = k1 k4 + k2 k3.  Satisfies phi(tau(k)) = varpi(phi(k)).
SphereMap ansatz_sphere_map(int band_sign = +1);
void ansatz_sphere_f(const double k[5], double f_out[5]);

/* Equivariant map S~4 -> S4(varpi) of degree 2n.  n = 1 returns the
 * ansatz map itself.  For other n, a degree-n cap map (suspended
 * quaternion power, flattened to the base point near the equator by a
 * C^1 smoothstep collar) is doubled onto the lower hemisphere through
 * phi(k) = varpi(phi(tau(k))). */
SphereMap equivariant_even_map(int n, double collar = 0.2);

// Projector-valued map on chart coordinates (or torus angles).
using ProjectorMap = std::function<Mat4(const double kappa[4])>;

// P(k) = hopf_projector(phi(k)) as a field over the chart.
ProjectorMap pullback_projector_chart(const SphereMap& phi);
// Same field through the collapse map, as a field over torus angles.
ProjectorMap pullback_projector_torus(const SphereMap& phi);

// Frobenius norm helpers used across the verification code.
double frob_norm(const Mat4& m);
double frob_norm2(const Mat2& m);

/* A named model: either a rational coefficient family (closed-form c2
 * available) or a sphere map pulled back through the Hopf projector.
 * Built from a JSON config
 *   {"family": "standard-ansatz" | "hopf" | "even-map", "n": <int>,
 *    "J": "1|S0|S1|S2|S3|S4", "collar": <float>}
 * or, for a custom rational family,
 *   {"numerators": [[[e1,e2,e3,e4], coeff], ...] x5, "powers": [p0..p4]}.
 */
struct Model {
    std::string family;
    std::optional<CoefficientMap> coeffs;
    std::optional<SphereMap> sphere_map;  // hopf / even-map families
    SymmetryChoice j{-1};
    int n = 1;
    double collar = 0.2;

    // Band projector over chart coordinates; band_sign in {+1, -1}.
    ProjectorMap projector_map(int band_sign) const;
    bool has_closed_form() const { return coeffs.has_value(); }
};

// `source` is "standard-ansatz", "hopf", inline JSON, or a file path.
Model load_model(const std::string& source);
Model model_from_json_text(const std::string& text);

}  // namespace rb
