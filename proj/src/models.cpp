#include "realbloch/models.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rb {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};
}  // namespace

Mat2 pauli(int i) {
    Mat2 m = Mat2::Zero();
    switch (i) {
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, -kI, kI, 0; break;
        case 3: m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("pauli: index must be 1, 2 or 3");
    }
    return m;
}

namespace {

Mat4 kron2(const Mat2& a, const Mat2& b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

}  // namespace

const std::array<Mat4, 5>& clifford_rep() {
    static const std::array<Mat4, 5> sigmas = [] {
        Mat2 id = Mat2::Identity();
        std::array<Mat4, 5> s;
        s[0] = kron2(pauli(1), pauli(3));
        s[1] = kron2(pauli(2), pauli(3));
        s[2] = kron2(id, pauli(1));
        s[3] = kron2(id, pauli(2));
        s[4] = kron2(pauli(3), pauli(3));
        return s;
    }();
    return sigmas;
}

double Polynomial4::eval(const double kappa[4]) const {
    double out = 0;
    for (const auto& t : terms_) {
        double m = t.coeff;
        for (int a = 0; a < 4; ++a)
            for (int e = 0; e < t.exponents[a]; ++e) m *= kappa[a];
        out += m;
    }
    return out;
}

Polynomial4 Polynomial4::partial(int axis) const {
    std::vector<Monomial> out;
    for (const auto& t : terms_) {
        if (t.exponents[axis] == 0) continue;
        Monomial d = t;
        d.coeff *= t.exponents[axis];
        d.exponents[axis] -= 1;
        out.push_back(d);
    }
    return Polynomial4(std::move(out));
}

RationalComponent::RationalComponent(Polynomial4 numerator, int power)
    : num_(std::move(numerator)), pow_(power) {
    if (pow_ < 0) throw std::invalid_argument("RationalComponent: negative power");
    for (int a = 0; a < 4; ++a) dnum_[a] = num_.partial(a);
}

double RationalComponent::eval(const double kappa[4]) const {
    double r2 = 0;
    for (int a = 0; a < 4; ++a) r2 += kappa[a] * kappa[a];
    return num_.eval(kappa) / std::pow(1.0 + r2, pow_);
}

void RationalComponent::eval_grad(const double kappa[4], double& value,
                                  double grad[4]) const {
    double r2 = 0;
    for (int a = 0; a < 4; ++a) r2 += kappa[a] * kappa[a];
    const double denom = 1.0 + r2;
    const double dp = std::pow(denom, pow_);
    const double p = num_.eval(kappa);
    value = p / dp;
    // d/da [P / denom^p] = (dP denom - 2 p kappa_a P) / denom^{p+1}
    for (int a = 0; a < 4; ++a)
        grad[a] = (dnum_[a].eval(kappa) * denom - 2.0 * pow_ * kappa[a] * p) /
                  (dp * denom);
}

CoefficientMap::CoefficientMap(std::array<RationalComponent, 5> components,
                               std::array<int, 5> declared_parity)
    : comps_(std::move(components)), parity_(declared_parity) {
    for (int s : parity_)
        if (s != -1 && s != 0 && s != 1)
            throw std::invalid_argument("CoefficientMap: parity must be -1, 0 or +1");
    double dev = parity_deviation();
    if (dev > 1e-12)
        throw std::invalid_argument("CoefficientMap: declared parity violated, deviation " +
                                    std::to_string(dev));
}

void CoefficientMap::eval(const double kappa[4], double f_out[5]) const {
    for (int j = 0; j < 5; ++j) f_out[j] = comps_[j].eval(kappa);
}

void CoefficientMap::eval_grad(const double kappa[4], double f_out[5],
                               double df_out[5][4]) const {
    for (int j = 0; j < 5; ++j) comps_[j].eval_grad(kappa, f_out[j], df_out[j]);
}

double CoefficientMap::q(const double kappa[4]) const {
    double f[5];
    eval(kappa, f);
    double q = 0;
    for (int j = 0; j < 5; ++j) q += f[j] * f[j];
    return q;
}

double CoefficientMap::parity_deviation(int samples, unsigned seed) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-6.0, 6.0);
    double worst = 0;
    for (int s = 0; s < samples; ++s) {
        double kappa[4], neg[4];
        for (int a = 0; a < 4; ++a) {
            kappa[a] = dist(rng);
            neg[a] = -kappa[a];
        }
        double f[5], g[5];
        eval(kappa, f);
        eval(neg, g);
        for (int j = 0; j < 5; ++j) {
            if (parity_[j] == 0) continue;
            worst = std::max(worst, std::abs(g[j] - parity_[j] * f[j]));
        }
    }
    return worst;
}

CoefficientMap standard_ansatz() {
    auto mono = [](int e1, int e2, int e3, int e4, double c) {
        return Monomial{{e1, e2, e3, e4}, c};
    };
    Polynomial4 p0({mono(2, 0, 0, 0, 1), mono(0, 2, 0, 0, 1), mono(0, 0, 2, 0, 1),
                    mono(0, 0, 0, 2, 1), mono(0, 0, 0, 0, -1)});
    Polynomial4 p1({mono(1, 0, 0, 0, 2), mono(0, 1, 0, 0, 2)});
    Polynomial4 p2({mono(1, 1, 0, 0, 4), mono(0, 0, 1, 1, -4)});
    Polynomial4 p3({mono(0, 0, 1, 0, 2), mono(0, 0, 0, 1, 2)});
    Polynomial4 p4({mono(1, 0, 0, 1, 4), mono(0, 1, 1, 0, 4)});
    std::array<RationalComponent, 5> comps = {
        RationalComponent(p0, 1), RationalComponent(p1, 1), RationalComponent(p2, 2),
        RationalComponent(p3, 1), RationalComponent(p4, 2)};
    return CoefficientMap(std::move(comps), {+1, -1, +1, -1, +1});
}

Mat4 dirac_hamiltonian(const CoefficientMap& f, const double kappa[4]) {
    double v[5];
    f.eval(kappa, v);
    const auto& sig = clifford_rep();
    Mat4 h = Mat4::Zero();
    for (int j = 0; j < 5; ++j) h += v[j] * sig[j];
    return h;
}

Mat4 hopf_projector(const double k[5]) {
    const auto& sig = clifford_rep();
    Mat4 p = Mat4::Identity();
    for (int j = 0; j < 5; ++j) p += k[j] * sig[j];
    return 0.5 * p;
}

Mat4 band_projector(const CoefficientMap& f, const double kappa[4], int band_sign) {
    double v[5];
    f.eval(kappa, v);
    double q = 0;
    for (int j = 0; j < 5; ++j) q += v[j] * v[j];
    if (q <= 0) throw std::domain_error("band_projector: Q vanished, gap closed");
    const double inv = band_sign / std::sqrt(q);
    double n[5];
    for (int j = 0; j < 5; ++j) n[j] = v[j] * inv;
    return hopf_projector(n);
}

Mat4 SymmetryChoice::matrix() const {
    if (j_index < 0) return Mat4::Identity();
    return clifford_rep()[j_index];
}

SymmetryClass SymmetryChoice::declared_class() const {
    Mat4 j = matrix();
    Mat4 theta2 = j * j.conjugate();
    if ((theta2 - Mat4::Identity()).norm() < 1e-12) return SymmetryClass::AI;
    if ((theta2 + Mat4::Identity()).norm() < 1e-12) return SymmetryClass::AII;
    throw std::logic_error("SymmetryChoice: J conj(J) is not +-1");
}

std::string SymmetryChoice::name() const {
    return j_index < 0 ? "1" : "S" + std::to_string(j_index);
}

SymmetryChoice SymmetryChoice::from_name(const std::string& name) {
    if (name == "1") return {-1};
    if (name.size() == 2 && name[0] == 'S' && name[1] >= '0' && name[1] <= '4')
        return {name[1] - '0'};
    throw std::invalid_argument("SymmetryChoice: expected 1 or S0..S4, got " + name);
}

SymmetryReport check_symmetry(const CoefficientMap& f, const SymmetryChoice& choice,
                              const Grid& grid) {
    SymmetryReport report;
    report.symmetry_class = choice.declared_class();
    report.declared_parity = f.parity();

    // J Sigma_j J* = eps_j Sigma_j pins the parity row: s_j = eps_j (-1)^j.
    const Mat4 j = choice.matrix();
    const auto& sig = clifford_rep();
    for (int i = 0; i < 5; ++i) {
        Mat4 conjugated = j * sig[i] * j.adjoint();
        int eps;
        if ((conjugated - sig[i]).norm() < 1e-12)
            eps = +1;
        else if ((conjugated + sig[i]).norm() < 1e-12)
            eps = -1;
        else
            throw std::logic_error("check_symmetry: J does not normalize the Clifford rep");
        report.expected_parity[i] = eps * ((i % 2 == 0) ? +1 : -1);
    }
    report.parity_match = report.expected_parity == report.declared_parity;

    double kappa[8], neg[8];
    const std::int64_t total = grid.total_points();
    for (std::int64_t p = 0; p < total; ++p) {
        grid.point(p, std::span<double>(kappa, grid.dim()));
        for (int a = 0; a < grid.dim(); ++a) neg[a] = -kappa[a];
        Mat4 h = dirac_hamiltonian(f, kappa);
        Mat4 h_neg = dirac_hamiltonian(f, neg);
        double dev = frob_norm(j * h * j.adjoint() - h_neg.conjugate());
        report.max_deviation = std::max(report.max_deviation, dev);
    }
    return report;
}

Mat2 su2_from_s3(const double k[4]) {
    Mat2 u = k[3] * Mat2::Identity();
    for (int a = 0; a < 3; ++a) u += kI * k[a] * pauli(a + 1);
    return u;
}

void s3_from_su2(const Mat2& u, double k_out[4]) {
    k_out[0] = 0.5 * (u(0, 1) + u(1, 0)).imag();
    k_out[1] = 0.5 * (u(0, 1) - u(1, 0)).real();
    k_out[2] = 0.5 * (u(0, 0) - u(1, 1)).imag();
    k_out[3] = 0.5 * (u(0, 0) + u(1, 1)).real();
}

SU2Map su2_power_map(int n) {
    SU2Map map;
    const int m = std::abs(n);
    const bool invert = n < 0;
    map.value = [m, invert](const double k[4]) {
        Mat2 u = su2_from_s3(k);
        if (invert) u = u.adjoint().eval();
        Mat2 out = Mat2::Identity();
        for (int i = 0; i < m; ++i) out = out * u;
        return out;
    };
    map.ambient_grad = [m, invert](const double k[4], Mat2 dvalue[4]) {
        Mat2 u = su2_from_s3(k);
        Mat2 du[4];
        du[3] = Mat2::Identity();
        for (int a = 0; a < 3; ++a) du[a] = kI * pauli(a + 1);
        if (invert) {
            u = u.adjoint().eval();
            for (int a = 0; a < 4; ++a) du[a] = du[a].adjoint().eval();
        }
        // powers u^0 .. u^m
        std::vector<Mat2> pow(m + 1);
        pow[0] = Mat2::Identity();
        for (int i = 1; i <= m; ++i) pow[i] = pow[i - 1] * u;
        for (int a = 0; a < 4; ++a) {
            Mat2 d = Mat2::Zero();
            for (int i = 0; i < m; ++i) d += pow[i] * du[a] * pow[m - 1 - i];
            dvalue[a] = d;
        }
    };
    return map;
}

void ansatz_sphere_f(const double k[5], double f_out[5]) {
    f_out[0] = k[0];
    f_out[1] = k[1] + k[2];
    f_out[2] = k[1] * k[2] - k[3] * k[4];
    f_out[3] = k[3] + k[4];
    f_out[4] = k[1] * k[4] + k[2] * k[3];
}

SU2Map equator_ansatz_su2_map() {
    SU2Map map;
    auto normalized_f = [](const double k[4], double g[4]) {
        const double k5[5] = {0.0, k[0], k[1], k[2], k[3]};
        double f[5];
        ansatz_sphere_f(k5, f);
        double n2 = 0;
        for (int j = 1; j < 5; ++j) n2 += f[j] * f[j];
        const double inv = 1.0 / std::sqrt(n2);
        for (int j = 0; j < 4; ++j) g[j] = f[j + 1] * inv;
    };
    map.value = [normalized_f](const double k[4]) {
        double g[4];
        normalized_f(k, g);
        return su2_from_s3(g);
    };
    // Exact gradient: F is polynomial, chain rule through the normalization.
    map.ambient_grad = [](const double k[4], Mat2 dvalue[4]) {
        const double k1 = k[0], k2 = k[1], k3 = k[2], k4 = k[3];
        double f[4] = {k1 + k2, k1 * k2 - k3 * k4, k3 + k4, k1 * k4 + k2 * k3};
        double df[4][4] = {
            {1, 1, 0, 0},
            {k2, k1, -k4, -k3},
            {0, 0, 1, 1},
            {k4, k3, k2, k1},
        };
        double n2 = 0;
        for (int j = 0; j < 4; ++j) n2 += f[j] * f[j];
        const double inv = 1.0 / std::sqrt(n2);
        double g[4];
        for (int j = 0; j < 4; ++j) g[j] = f[j] * inv;
        for (int a = 0; a < 4; ++a) {
            double gdot = 0;
            for (int j = 0; j < 4; ++j) gdot += g[j] * df[j][a];
            double dg[4];
            for (int j = 0; j < 4; ++j) dg[j] = (df[j][a] - g[j] * gdot) * inv;
            dvalue[a] = su2_from_s3(dg);  // linear in its argument
        }
    };
    return map;
}

SphereMap identity_sphere_map() {
    SphereMap map;
    map.value = [](const double k_in[5], double k_out[5]) {
        for (int j = 0; j < 5; ++j) k_out[j] = k_in[j];
    };
    return map;
}

SphereMap ansatz_sphere_map(int band_sign) {
    SphereMap map;
    map.value = [band_sign](const double k_in[5], double k_out[5]) {
        double f[5];
        ansatz_sphere_f(k_in, f);
        double q = 0;
        for (int j = 0; j < 5; ++j) q += f[j] * f[j];
        const double inv = band_sign / std::sqrt(q);
        for (int j = 0; j < 5; ++j) k_out[j] = f[j] * inv;
    };
    return map;
}

namespace {

double smoothstep01(double x) {
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    return x * x * (3 - 2 * x);
}

// Degree-n self-map of S^3, quaternion power under iota, reflected in
// the first slot so the doubled hemisphere map comes out at +2n.
void s3_power(const double u[4], int n, double out[4]) {
    Mat2 g = su2_from_s3(u);
    Mat2 p = Mat2::Identity();
    const int m = std::abs(n);
    if (n < 0) g = g.adjoint().eval();
    for (int i = 0; i < m; ++i) p = p * g;
    s3_from_su2(p, out);
    out[0] = -out[0];
}

}  // namespace

SphereMap equivariant_even_map(int n, double collar) {
    if (n < 0) throw std::invalid_argument("equivariant_even_map: n must be >= 0");
    if (collar <= 0 || collar >= kPi / 2)
        throw std::invalid_argument("equivariant_even_map: collar out of range");
    if (n == 1) return ansatz_sphere_map(+1);

    SphereMap map;
    if (n == 0) {
        map.value = [](const double*, double k_out[5]) {
            k_out[0] = 1;
            k_out[1] = k_out[2] = k_out[3] = k_out[4] = 0;
        };
        return map;
    }

    map.value = [n, collar](const double k_in[5], double k_out[5]) {
        // Reduce to the upper hemisphere (k4 >= 0); the lower one is the
        // varpi-twist of the tau image.
        double k[5];
        bool lower = k_in[4] < 0;
        if (lower) {
            k[0] = k_in[0];
            for (int j = 1; j < 5; ++j) k[j] = -k_in[j];
        } else {
            for (int j = 0; j < 5; ++j) k[j] = k_in[j];
        }

        const double c4 = std::min(k[4], 1.0);
        const double rho = std::acos(c4);  // polar angle from the cap pole
        const double edge = kPi / 2 - collar;
        double t[5];
        if (rho >= edge) {
            t[0] = 1;
            t[1] = t[2] = t[3] = t[4] = 0;
        } else {
            const double beta = kPi * (1.0 - smoothstep01(rho / edge));
            double norm = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + k[3] * k[3]);
            if (norm < 1e-300) {
                // cap pole; sin(beta) = 0 there so the direction is immaterial
                t[0] = std::cos(beta);
                t[1] = t[2] = t[3] = t[4] = 0;
            } else {
                double u[4] = {k[0] / norm, k[1] / norm, k[2] / norm, k[3] / norm};
                double q[4];
                s3_power(u, n, q);
                const double sb = std::sin(beta);
                t[0] = std::cos(beta);
                for (int j = 0; j < 4; ++j) t[j + 1] = sb * q[j];
            }
        }
        if (lower) {
            // varpi twist
            k_out[0] = t[0];
            k_out[1] = -t[1];
            k_out[2] = t[2];
            k_out[3] = -t[3];
            k_out[4] = t[4];
        } else {
            for (int j = 0; j < 5; ++j) k_out[j] = t[j];
        }
    };
    return map;
}

ProjectorMap pullback_projector_chart(const SphereMap& phi) {
    auto value = phi.value;
    return [value](const double kappa[4]) {
        double k[5], y[5];
        stereo_to_sphere(std::span<const double>(kappa, 4), std::span<double>(k, 5));
        value(k, y);
        return hopf_projector(y);
    };
}

ProjectorMap pullback_projector_torus(const SphereMap& phi) {
    auto value = phi.value;
    return [value](const double kappa[4]) {
        double k[5], y[5];
        collapse_map(kappa, k);
        value(k, y);
        return hopf_projector(y);
    };
}

double frob_norm(const Mat4& m) { return m.norm(); }
double frob_norm2(const Mat2& m) { return m.norm(); }

ProjectorMap Model::projector_map(int band_sign) const {
    if (band_sign != 1 && band_sign != -1)
        throw std::invalid_argument("Model: band sign must be +-1");
    if (coeffs) {
        CoefficientMap f = *coeffs;
        return [f, band_sign](const double kappa[4]) {
            return band_projector(f, kappa, band_sign);
        };
    }
    auto value = sphere_map->value;
    return [value, band_sign](const double kappa[4]) {
        double k[5], y[5];
        stereo_to_sphere(std::span<const double>(kappa, 4), std::span<double>(k, 5));
        value(k, y);
        if (band_sign < 0)
            for (double& c : y) c = -c;
        return hopf_projector(y);
    };
}

namespace {

CoefficientMap rational_from_json(const nlohmann::json& j) {
    const auto& numerators = j.at("numerators");
    const auto& powers = j.at("powers");
    if (numerators.size() != 5 || powers.size() != 5)
        throw std::invalid_argument("model config: need 5 numerators and 5 powers");
    std::array<RationalComponent, 5> comps;
    for (int c = 0; c < 5; ++c) {
        std::vector<Monomial> terms;
        for (const auto& term : numerators[c]) {
            const auto& expo = term.at(0);
            if (expo.size() != 4)
                throw std::invalid_argument("model config: monomial needs 4 exponents");
            Monomial m;
            for (int a = 0; a < 4; ++a) m.exponents[a] = expo.at(a).get<int>();
            m.coeff = term.at(1).get<double>();
            terms.push_back(m);
        }
        comps[c] = RationalComponent(Polynomial4(std::move(terms)),
                                     powers.at(c).get<int>());
    }
    // detect the parity of each component from samples
    std::array<int, 5> parity{};
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(-6.0, 6.0);
    for (int c = 0; c < 5; ++c) {
        double even = 0, odd = 0;
        for (int s = 0; s < 64; ++s) {
            double kappa[4], neg[4];
            for (int a = 0; a < 4; ++a) {
                kappa[a] = dist(rng);
                neg[a] = -kappa[a];
            }
            double v = comps[c].eval(kappa), w = comps[c].eval(neg);
            even = std::max(even, std::abs(w - v));
            odd = std::max(odd, std::abs(w + v));
        }
        parity[c] = even < 1e-12 ? +1 : (odd < 1e-12 ? -1 : 0);
    }
    return CoefficientMap(std::move(comps), parity);
}

}  // namespace

Model model_from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Model model;
    model.j = SymmetryChoice::from_name(j.value("J", "1"));
    model.n = j.value("n", 1);
    model.collar = j.value("collar", 0.2);
    if (j.contains("numerators")) {
        model.family = "rational";
        model.coeffs = rational_from_json(j);
        return model;
    }
    model.family = j.value("family", "");
    if (model.family == "standard-ansatz") {
        model.coeffs = standard_ansatz();
    } else if (model.family == "hopf") {
        model.sphere_map = identity_sphere_map();
    } else if (model.family == "even-map") {
        model.sphere_map = equivariant_even_map(model.n, model.collar);
    } else {
        throw std::invalid_argument("model config: unknown family '" + model.family +
                                    "'");
    }
    return model;
}

Model load_model(const std::string& source) {
    if (source == "standard-ansatz" || source == "ansatz")
        return model_from_json_text(R"({"family": "standard-ansatz"})");
    if (source == "hopf") return model_from_json_text(R"({"family": "hopf"})");
    if (!source.empty() && source.front() == '{') return model_from_json_text(source);
    std::ifstream in(source);
    if (!in) throw std::invalid_argument("model config: cannot open " + source);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json_text(buf.str());
}

}  // namespace rb
