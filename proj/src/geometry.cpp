#include "realbloch/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rb {

namespace {
constexpr double kPi = std::numbers::pi;
}

SpherePoint::SpherePoint(std::vector<double> coords) : k(std::move(coords)) {
    double n2 = 0;
    for (double c : k) n2 += c * c;
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
        throw std::invalid_argument("SpherePoint: not unit norm");
}

TorusPoint::TorusPoint(std::vector<double> a) : angles(std::move(a)) {
    for (double x : angles)
        if (x < -kPi || x >= kPi)
            throw std::invalid_argument("TorusPoint: angle outside [-pi, pi)");
}

double wrap_angle(double x) {
    double y = std::remainder(x, 2 * kPi);  // (-pi, pi]
    if (y == kPi) y = -kPi;
    return y;
}

void stereo_to_sphere(std::span<const double> kappa, std::span<double> k_out) {
    const size_t d = kappa.size();
    double r2 = 0;
    for (double x : kappa) r2 += x * x;
    const double denom = r2 + 1.0;
    k_out[0] = (r2 - 1.0) / denom;
    for (size_t j = 0; j < d; ++j) k_out[j + 1] = 2.0 * kappa[j] / denom;
}

SpherePoint stereo_to_sphere(const std::vector<double>& kappa) {
    std::vector<double> k(kappa.size() + 1);
    stereo_to_sphere(kappa, k);
    return SpherePoint(std::move(k));
}

void sphere_to_stereo(std::span<const double> k, std::span<double> kappa_out) {
    // near the pole 1 - k0 cancels; on the sphere it equals
    // sum_j k_j^2 / (1 + k0), which keeps full relative precision
    double denom = 1.0 - k[0];
    if (k[0] > 0.0) {
        double tail = 0;
        for (size_t j = 1; j < k.size(); ++j) tail += k[j] * k[j];
        denom = tail / (1.0 + k[0]);
    }
    if (denom == 0.0)
        throw std::invalid_argument("sphere_to_stereo: pole k0 = 1 has no chart image");
    for (size_t j = 0; j + 1 < k.size(); ++j) kappa_out[j] = k[j + 1] / denom;
}

std::vector<double> sphere_to_stereo(const SpherePoint& p) {
    std::vector<double> kappa(p.k.size() - 1);
    sphere_to_stereo(p.k, kappa);
    return kappa;
}

void apply_involution(InvolutionKind kind, std::span<const double> in,
                      std::span<double> out) {
    switch (kind) {
        case InvolutionKind::TauSphere:
            out[0] = in[0];
            for (size_t j = 1; j < in.size(); ++j) out[j] = -in[j];
            return;
        case InvolutionKind::VarpiS4:
            if (in.size() != 5)
                throw std::invalid_argument("varpi involution needs d = 4");
            out[0] = in[0];
            out[1] = -in[1];
            out[2] = in[2];
            out[3] = -in[3];
            out[4] = in[4];
            return;
        case InvolutionKind::Antipodal:
            for (size_t j = 0; j < in.size(); ++j) out[j] = -in[j];
            return;
        case InvolutionKind::TauTorus:
            for (size_t j = 0; j < in.size(); ++j) out[j] = wrap_angle(-in[j]);
            return;
    }
    throw std::invalid_argument("apply_involution: unknown kind");
}

std::vector<double> apply_involution(InvolutionKind kind,
                                     const std::vector<double>& p) {
    std::vector<double> out(p.size());
    apply_involution(kind, p, out);
    return out;
}

void collapse_map(const double kappa[4], double k_out[5]) {
    double r2 = 0;
    for (int j = 0; j < 4; ++j) r2 += kappa[j] * kappa[j];
    const double r = std::sqrt(r2);
    const double alpha = std::min(r, kPi);
    k_out[0] = -std::cos(alpha);
    if (r == 0.0) {
        for (int j = 1; j < 5; ++j) k_out[j] = 0.0;
        return;
    }
    const double s = std::sin(alpha) / r;
    for (int j = 0; j < 4; ++j) k_out[j + 1] = s * kappa[j];
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    // Newton iteration on P_n from the Chebyshev initial guess.
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = a + 0.5 * (b - a) * (1.0 - x);
        weights[i] = (b - a) / ((1.0 - x * x) * pp * pp);
    }
}

Grid Grid::torus(int d, int n, bool offset) {
    if (d < 1 || n < 4) throw std::invalid_argument("Grid::torus: need d >= 1, n >= 4");
    Grid g;
    g.kind_ = GridKind::Torus;
    g.offset_ = offset;
    GridAxis axis;
    axis.nodes.resize(n);
    axis.coord_weights.assign(n, 2 * kPi / n);
    axis.jacobian.assign(n, 1.0);
    for (int i = 0; i < n; ++i) {
        double t = offset ? (i + 0.5) : static_cast<double>(i);
        axis.nodes[i] = -kPi + 2 * kPi * t / n;
    }
    g.axes_.assign(d, axis);
    return g;
}

Grid Grid::truncated_chart(int d, double half_width, int n) {
    if (d < 1 || n < 4 || half_width <= 0)
        throw std::invalid_argument("Grid::truncated_chart: bad spec");
    Grid g;
    g.kind_ = GridKind::TruncatedChart;
    g.half_width_ = half_width;
    GridAxis axis;
    const double h = 2 * half_width / (n - 1);
    axis.nodes.resize(n);
    axis.coord_weights.assign(n, h);
    axis.coord_weights.front() = h / 2;
    axis.coord_weights.back() = h / 2;
    axis.jacobian.assign(n, 1.0);
    for (int i = 0; i < n; ++i) axis.nodes[i] = -half_width + i * h;
    g.axes_.assign(d, axis);
    return g;
}

Grid Grid::s3_angles(int n_theta, int n_phi, int n_psi) {
    if (n_theta < 4 || n_phi < 4 || n_psi < 4)
        throw std::invalid_argument("Grid::s3_angles: need >= 4 nodes per angle");
    Grid g;
    g.kind_ = GridKind::S3Angles;
    g.axes_.resize(3);

    gauss_legendre(n_theta, 0.0, kPi, g.axes_[0].nodes, g.axes_[0].coord_weights);
    g.axes_[0].jacobian.resize(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        double s = std::sin(g.axes_[0].nodes[i]);
        g.axes_[0].jacobian[i] = s * s;
    }
    gauss_legendre(n_phi, 0.0, kPi, g.axes_[1].nodes, g.axes_[1].coord_weights);
    g.axes_[1].jacobian.resize(n_phi);
    for (int i = 0; i < n_phi; ++i)
        g.axes_[1].jacobian[i] = std::sin(g.axes_[1].nodes[i]);

    g.axes_[2].nodes.resize(n_psi);
    g.axes_[2].coord_weights.assign(n_psi, 2 * kPi / n_psi);
    g.axes_[2].jacobian.assign(n_psi, 1.0);
    for (int i = 0; i < n_psi; ++i) g.axes_[2].nodes[i] = 2 * kPi * i / n_psi;
    return g;
}

std::int64_t Grid::total_points() const {
    std::int64_t n = 1;
    for (const auto& a : axes_) n *= static_cast<std::int64_t>(a.nodes.size());
    return n;
}

void Grid::indices(std::int64_t flat, std::span<int> idx) const {
    for (int a = dim() - 1; a >= 0; --a) {
        auto n = static_cast<std::int64_t>(axes_[a].nodes.size());
        idx[a] = static_cast<int>(flat % n);
        flat /= n;
    }
}

void Grid::point(std::int64_t flat, std::span<double> out) const {
    int idx[8];
    indices(flat, std::span<int>(idx, dim()));
    for (int a = 0; a < dim(); ++a) out[a] = axes_[a].nodes[idx[a]];
}

double Grid::coord_weight(std::span<const int> idx) const {
    double w = 1;
    for (int a = 0; a < dim(); ++a) w *= axes_[a].coord_weights[idx[a]];
    return w;
}

double Grid::measure_weight(std::span<const int> idx) const {
    double w = 1;
    for (int a = 0; a < dim(); ++a)
        w *= axes_[a].coord_weights[idx[a]] * axes_[a].jacobian[idx[a]];
    return w;
}

double Grid::volume() const {
    double v = 1;
    for (const auto& axis : axes_) {
        double s = 0;
        for (size_t i = 0; i < axis.nodes.size(); ++i)
            s += axis.coord_weights[i] * axis.jacobian[i];
        v *= s;
    }
    return v;
}

std::int64_t Grid::involution_partner(std::span<const int> idx,
                                      std::span<const bool> flip_axis) const {
    if (kind_ == GridKind::S3Angles)
        throw std::invalid_argument("involution_partner: angle grids are not closed");
    std::int64_t flat = 0;
    for (int a = 0; a < dim(); ++a) {
        const int n = static_cast<int>(axes_[a].nodes.size());
        int i = idx[a];
        if (flip_axis[a]) {
            if (kind_ == GridKind::Torus)
                i = offset_ ? (n - 1 - i) : (n - i) % n;
            else
                i = n - 1 - i;  // chart nodes are symmetric about 0
        }
        flat = flat * n + i;
    }
    return flat;
}

std::string Grid::describe() const {
    switch (kind_) {
        case GridKind::Torus:
            return "torus(d=" + std::to_string(dim()) +
                   ",n=" + std::to_string(axes_[0].nodes.size()) +
                   (offset_ ? ",offset" : "") + ")";
        case GridKind::TruncatedChart:
            return "chart(d=" + std::to_string(dim()) +
                   ",L=" + std::to_string(half_width_) +
                   ",n=" + std::to_string(axes_[0].nodes.size()) + ")";
        case GridKind::S3Angles:
            return "s3-angles(" + std::to_string(axes_[0].nodes.size()) + "," +
                   std::to_string(axes_[1].nodes.size()) + "," +
                   std::to_string(axes_[2].nodes.size()) + ")";
    }
    return "?";
}

}  // namespace rb
