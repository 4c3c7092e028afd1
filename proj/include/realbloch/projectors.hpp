#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "realbloch/geometry.hpp"
#include "realbloch/models.hpp"

namespace rb {

using HamiltonianMap = std::function<Mat4(const double* point)>;

// Grid-sampled family of 4x4 Hermitian idempotent matrices.
struct ProjectorField {
    Grid grid;
    std::vector<Mat4> samples;  // one per grid point, row-major flat order
    int rank = 0;
    std::string chart_tag;  // "torus-angles", "stereo-chart", ...
};

ProjectorField sample_field(const ProjectorMap& p, const Grid& grid, int rank,
                            std::string chart_tag);

enum class BandSelect { Negative, Positive };

// Raised when the selected bands touch the rest of the spectrum.
struct GapViolation : std::runtime_error {
    GapViolation(std::vector<double> point, double gap);
    std::vector<double> offending_point;
    double gap;
};

// Orthogonal projector onto the eigenvectors of the selected sign at
// every grid point; rank must come out constant.
ProjectorField spectral_projector(const HamiltonianMap& h, const Grid& grid,
                                  BandSelect select);

struct Contour {
    double center = 0;   // real energy
    double radius = 0;
    int nodes = 64;      // trapezoid nodes, >= 8
};

// Circle around the selected band: centered mid-band, radius reaching
// half way across the gap on both sides.
Contour default_contour(const HamiltonianMap& h, const Grid& grid,
                        BandSelect select);

// Trapezoid discretization of the resolvent circle integral
// (i / 2 pi) oint (H - z)^{-1} dz.
ProjectorField riesz_projector(const HamiltonianMap& h, const Grid& grid,
                               const Contour& contour);

struct RealStructureReport {
    double max_deviation = 0;  // of J conj(P(k)) J* - P(tau(k))
    std::int64_t argmax_flat = -1;
};

// Checks J conj(P(k)) J* = P(inv(k)) using the grid's partner indices;
// J defaults to the identity (the plain Real-structure check).
RealStructureReport verify_real_structure(const ProjectorField& field,
                                          InvolutionKind involution,
                                          const Mat4& j = Mat4::Identity());

struct HealthReport {
    double max_idempotency_defect = 0;  // |P^2 - P|
    double max_hermiticity_defect = 0;  // |P - P*|
    double trace_min = 0, trace_max = 0;
    double max_trace_imag = 0;
    std::int64_t worst_flat = -1;  // grid index of the largest idempotency defect
};

HealthReport projector_health(const ProjectorField& field);

// Binary-free JSON round trip: complex entries as [re, im] pairs in
// row-major order, plus the grid metadata needed to rebuild the field.
std::string export_field_json(const ProjectorField& field);
ProjectorField import_field_json(const std::string& text);

double max_field_distance(const ProjectorField& a, const ProjectorField& b);

}  // namespace rb
