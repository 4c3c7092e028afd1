#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rb {

// Point on S^d embedded in R^{d+1}; unit norm to 1e-12.
struct SpherePoint {
    std::vector<double> k;
    explicit SpherePoint(std::vector<double> coords);
    int dim() const { return static_cast<int>(k.size()) - 1; }
};

// Point on T^d as angles, each in [-pi, pi).
struct TorusPoint {
    std::vector<double> angles;
    explicit TorusPoint(std::vector<double> a);
    int dim() const { return static_cast<int>(angles.size()); }
};

double wrap_angle(double x);  // into [-pi, pi)

// Stereographic chart R^d -> S^d:
//   k0 = (|kappa|^2 - 1) / (|kappa|^2 + 1),  kj = 2 kappa_j / (|kappa|^2 + 1)
void stereo_to_sphere(std::span<const double> kappa, std::span<double> k_out);
SpherePoint stereo_to_sphere(const std::vector<double>& kappa);

// Inverse chart, kappa_j = k_j / (1 - k0); undefined at the pole k0 = 1.
void sphere_to_stereo(std::span<const double> k, std::span<double> kappa_out);
std::vector<double> sphere_to_stereo(const SpherePoint& k);

enum class InvolutionKind {
    TauSphere,  // (k0, k1, .., kd) -> (k0, -k1, .., -kd)
    VarpiS4,    // (k0, .., k4) -> (k0, -k1, k2, -k3, k4); d = 4 only
    Antipodal,  // k -> -k
    TauTorus,   // kappa -> -kappa (angles, wrapped)
};

void apply_involution(InvolutionKind kind, std::span<const double> in,
                      std::span<double> out);
std::vector<double> apply_involution(InvolutionKind kind,
                                     const std::vector<double>& p);

// Equivariant collapse T~4 -> S~4: radial clamp map.  With r = |kappa|
// and alpha = min(r, pi):  k0 = -cos(alpha), k_j = sin(alpha) kappa_j / r.
// Everything with r >= pi (which contains the sub-tori with a coordinate
// pinned at the fixed-point angle pi) lands on (1,0,0,0,0).
void collapse_map(const double kappa[4], double k_out[5]);

enum class GridKind { Torus, TruncatedChart, S3Angles };

struct GridAxis {
    std::vector<double> nodes;
    std::vector<double> coord_weights;  // quadrature weights in the coordinate
    std::vector<double> jacobian;       // extra measure factor per node (1 if flat)
};

/* Product quadrature grid on a torus, a truncated chart box, or S^3 in
 * hyperspherical angles.  Axis data is stored per axis; full points are
 * produced on demand, so large 4D grids never materialise.  Immutable
 * after construction. */
class Grid {
  public:
    // Uniform N^d grid of angles.  Aligned placement puts nodes at
    // -pi + 2 pi i / N (contains the involution fixed points when N is
    // even); offset placement shifts by half a step so that -kappa of a
    // node is again a node without any wrap identification.
    static Grid torus(int d, int n, bool offset = false);

    // Uniform grid on [-L, L]^d with trapezoid weights, endpoints included.
    static Grid truncated_chart(int d, double half_width, int n);

    // Gauss-Legendre in theta in [0, pi] (jacobian sin^2) and phi in
    // [0, pi] (jacobian sin), uniform in psi in [0, 2 pi).
    static Grid s3_angles(int n_theta, int n_phi, int n_psi);

    GridKind kind() const { return kind_; }
    int dim() const { return static_cast<int>(axes_.size()); }
    const GridAxis& axis(int a) const { return axes_[a]; }
    bool torus_offset() const { return offset_; }
    double chart_half_width() const { return half_width_; }

    std::int64_t total_points() const;
    void point(std::int64_t flat, std::span<double> out) const;
    void indices(std::int64_t flat, std::span<int> idx) const;
    double coord_weight(std::span<const int> idx) const;
    double measure_weight(std::span<const int> idx) const;

    // Sum of measure weights; equals the domain volume up to quadrature.
    double volume() const;

    // Flat index of the grid point representing the involution image of
    // point `idx`, where the involution flips the sign of the axes in
    // `flip_axis`.  Throws if the grid is not closed under that map.
    std::int64_t involution_partner(std::span<const int> idx,
                                    std::span<const bool> flip_axis) const;

    std::string describe() const;  // echoed into reports

  private:
    GridKind kind_ = GridKind::Torus;
    std::vector<GridAxis> axes_;
    bool offset_ = false;
    double half_width_ = 0.0;
};

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace rb
