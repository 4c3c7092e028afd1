#pragma once

#include <optional>
#include <string>
#include <vector>

#include "realbloch/geometry.hpp"
#include "realbloch/models.hpp"
#include "realbloch/projectors.hpp"

namespace rb {

struct RefinementEntry {
    int resolution;
    double value;
};

struct InvariantReport {
    double value = 0;
    long nearest_integer = 0;
    double residual = 0;  // |value - nearest_integer|
    std::string method;
    std::string grid_spec;
    std::vector<RefinementEntry> history;
};

InvariantReport make_report(double value, std::string method, std::string grid_spec,
                            std::vector<RefinementEntry> history = {});

struct ComputeOptions {
    int threads = 0;  // 0 = all hardware threads; 1 = bit-reproducible path
};

/* (1/8 pi^2) integral of Tr[P (dP)^4] over a 4D grid with central
 * finite differences (periodic wrap on tori; on charts the evaluation
 * box extends two stencil widths beyond the integration box).  The map
 * variant streams axis-0 slabs and never materialises the field. */
InvariantReport second_chern_trace(const ProjectorMap& p, const Grid& grid,
                                   const ComputeOptions& opts = {});
// Eager-field variant; periodic grids only (a chart field has no ghosts).
InvariantReport second_chern_trace(const ProjectorField& field,
                                   const ComputeOptions& opts = {});

// Chern density of the rational family, with exact derivatives:
//   +-(3/8 pi^2) Q^{-5/2} sum_j (-1)^{j+1} F_j det[dF_{i != j}].
InvariantReport second_chern_closed_form(const CoefficientMap& f, const Grid& grid,
                                         int band_sign,
                                         const ComputeOptions& opts = {});

// (i/2 pi) integral of Tr[P dP dP] over a 2D periodic grid.
InvariantReport first_chern(const ProjectorMap& p2, const Grid& grid2);
InvariantReport first_chern(const ProjectorField& field2);

// Restrict a 4D projector map to a 2D coordinate slice: axes (a, b) stay
// free, the other two are pinned at `anchor` values.
ProjectorMap slice_projector_map(const ProjectorMap& p4, int axis_a, int axis_b,
                                 const std::array<double, 2>& anchor);

// deg = (-1/24 pi^2) integral of Tr[(U^{-1} dU)^3] over S^3 in
// hyperspherical angles.  Uses the map's exact ambient gradient when
// present, else central differences with `fd_step` in the angles.
InvariantReport cartan_degree(const SU2Map& map, const Grid& s3_grid,
                              double fd_step = 1e-5);

// S^3 embedding used by the Cartan integral; oriented so that the
// identity map S^3 -> SU(2) has degree +1.
void s3_embed(const double angles[3], double k_out[4]);

struct RegularValueOptions {
    std::vector<double> target;  // empty -> a canned generic value per domain
    int seeds = 400;
    double dedupe_radius = 1e-6;
    double jacobian_floor = 1e-8;
    double fd_step = 1e-7;
    unsigned rng_seed = 20240915;
};

struct RegularValueResult {
    long degree = 0;
    std::vector<std::vector<double>> preimages;  // ambient/domain coordinates
    std::vector<int> signs;
    InvariantReport report;
};

// Signed preimage count of a regular value, by multi-start Newton.
RegularValueResult regular_value_degree_s3(const SU2Map& map,
                                           const RegularValueOptions& opts = {});
RegularValueResult regular_value_degree_s4(const SphereMap& map,
                                           const RegularValueOptions& opts = {});
// Maps from torus angles into S^4 (the collapse map and its composites).
RegularValueResult regular_value_degree_t4(
    const std::function<void(const double kappa[4], double k_out[5])>& map,
    const RegularValueOptions& opts = {});
// Proper self-maps of R^4, e.g. (z, w) -> (z + w, z w) as a real map.
RegularValueResult regular_value_degree_r4(
    const std::function<void(const double x[4], double y[4])>& map,
    const std::function<void(const double x[4], double jac[16])>& jacobian,
    const RegularValueOptions& opts = {});

// deg = (1/Vol(S^4)) integral of the pulled-back volume form, over the
// stereographic chart (finite differences at the grid spacing).
InvariantReport volume_degree_s4(const SphereMap& map, const Grid& chart_grid,
                                 const ComputeOptions& opts = {});

struct SliceC1 {
    int axis_a, axis_b;
    std::array<double, 2> anchor;
    double value;
};

struct AiConsistencyReport {
    bool applicable = false;   // Real-structure / symmetry check passed
    double symmetry_deviation = 0;
    std::vector<SliceC1> slice_c1;  // all fixed-point-anchored 2D slices
    double max_slice_c1 = 0;
    InvariantReport c2;
    bool c1_vanishes = false;  // all below 1e-6
    bool c2_even = false;
    bool consistent = false;
};

/* Theorem-level check for an AI model given by a coefficient map: first
 * Chern numbers of every fixed-point-anchored 2D slice must vanish and
 * the second Chern number must be even. */
AiConsistencyReport ai_consistency(const CoefficientMap& f,
                                   const SymmetryChoice& choice, int band_sign,
                                   const Grid& grid4,
                                   const ComputeOptions& opts = {});

// Same check for a projector map given directly on the chart (pullbacks
// of equivariant sphere maps); the symmetry screen becomes the sampled
// Real-structure deviation conj(P(kappa)) vs P(-kappa).
AiConsistencyReport ai_consistency_chart_map(const ProjectorMap& p4,
                                             const Grid& grid4,
                                             const ComputeOptions& opts = {});

struct CollapsePullbackReport {
    InvariantReport sphere_c2;  // computed on the chart grid over S^4
    InvariantReport torus_c2;   // of the collapse pullback on T^4
    bool match = false;         // nearest integers equal
};

CollapsePullbackReport collapse_pullback_check(const SphereMap& model_map,
                                               const Grid& chart_grid,
                                               const Grid& torus_grid,
                                               const ComputeOptions& opts = {});

}  // namespace rb
