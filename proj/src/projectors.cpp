#include "realbloch/projectors.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"

namespace rb {

namespace {
constexpr double kPi = std::numbers::pi;
}

ProjectorField sample_field(const ProjectorMap& p, const Grid& grid, int rank,
                            std::string chart_tag) {
    ProjectorField field{grid, {}, rank, std::move(chart_tag)};
    const std::int64_t total = grid.total_points();
    field.samples.resize(total);
    double point[8];
    for (std::int64_t i = 0; i < total; ++i) {
        grid.point(i, std::span<double>(point, grid.dim()));
        field.samples[i] = p(point);
    }
    return field;
}

GapViolation::GapViolation(std::vector<double> point, double g)
    : std::runtime_error("spectral gap violated (gap = " + std::to_string(g) + ")"),
      offending_point(std::move(point)),
      gap(g) {}

namespace {

std::vector<double> grid_point_vec(const Grid& grid, std::int64_t flat) {
    std::vector<double> p(grid.dim());
    grid.point(flat, p);
    return p;
}

}  // namespace

ProjectorField spectral_projector(const HamiltonianMap& h, const Grid& grid,
                                  BandSelect select) {
    ProjectorField field{grid, {}, 0, "spectral"};
    const std::int64_t total = grid.total_points();
    field.samples.resize(total);
    double point[8];
    int rank = -1;
    for (std::int64_t i = 0; i < total; ++i) {
        grid.point(i, std::span<double>(point, grid.dim()));
        Eigen::SelfAdjointEigenSolver<Mat4> solver(h(point));
        const auto& vals = solver.eigenvalues();
        const auto& vecs = solver.eigenvectors();
        Mat4 p = Mat4::Zero();
        int count = 0;
        double gap = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 4; ++a) {
            const bool sel_a = (select == BandSelect::Negative) ? vals[a] < 0 : vals[a] > 0;
            if (sel_a) {
                p += vecs.col(a) * vecs.col(a).adjoint();
                ++count;
            }
            for (int b = 0; b < 4; ++b) {
                const bool sel_b =
                    (select == BandSelect::Negative) ? vals[b] < 0 : vals[b] > 0;
                if (sel_a != sel_b) gap = std::min(gap, std::abs(vals[a] - vals[b]));
            }
        }
        if (rank < 0) rank = count;
        if (count != rank || count == 0 || count == 4 || gap <= 0)
            throw GapViolation(grid_point_vec(grid, i), std::isfinite(gap) ? gap : 0.0);
        field.samples[i] = p;
    }
    field.rank = rank;
    return field;
}

Contour default_contour(const HamiltonianMap& h, const Grid& grid,
                        BandSelect select) {
    const std::int64_t total = grid.total_points();
    double point[8];
    double band_lo = std::numeric_limits<double>::infinity();
    double band_hi = -band_lo;
    double gap = std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < total; ++i) {
        grid.point(i, std::span<double>(point, grid.dim()));
        Eigen::SelfAdjointEigenSolver<Mat4> solver(h(point));
        solver.compute(h(point), Eigen::EigenvaluesOnly);
        const auto& vals = solver.eigenvalues();
        for (int a = 0; a < 4; ++a) {
            const bool sel = (select == BandSelect::Negative) ? vals[a] < 0 : vals[a] > 0;
            if (sel) {
                band_lo = std::min(band_lo, vals[a]);
                band_hi = std::max(band_hi, vals[a]);
            }
            for (int b = a + 1; b < 4; ++b) {
                const bool sel_b =
                    (select == BandSelect::Negative) ? vals[b] < 0 : vals[b] > 0;
                if (sel != sel_b) gap = std::min(gap, std::abs(vals[a] - vals[b]));
            }
        }
    }
    if (!std::isfinite(band_lo) || !std::isfinite(gap) || gap <= 0)
        throw GapViolation({}, 0.0);
    Contour c;
    c.center = 0.5 * (band_lo + band_hi);
    c.radius = 0.5 * (band_hi - band_lo) + 0.5 * gap;
    c.nodes = 64;
    return c;
}

ProjectorField riesz_projector(const HamiltonianMap& h, const Grid& grid,
                               const Contour& contour) {
    if (contour.nodes < 8)
        throw std::invalid_argument("riesz_projector: need at least 8 contour nodes");
    if (contour.radius <= 0)
        throw std::invalid_argument("riesz_projector: radius must be positive");
    ProjectorField field{grid, {}, 0, "riesz"};
    const std::int64_t total = grid.total_points();
    field.samples.resize(total);
    double point[8];
    const cplx center(contour.center, 0.0);
    for (std::int64_t i = 0; i < total; ++i) {
        grid.point(i, std::span<double>(point, grid.dim()));
        Mat4 ham = h(point);

        // The circle must stay clear of the spectrum.
        Eigen::SelfAdjointEigenSolver<Mat4> solver(ham);
        solver.compute(ham, Eigen::EigenvaluesOnly);
        for (int a = 0; a < 4; ++a) {
            double dist = std::abs(std::abs(solver.eigenvalues()[a] - contour.center) -
                                   contour.radius);
            if (dist <= 0)
                throw std::runtime_error("riesz_projector: contour touches the spectrum");
        }

        // (i/2pi) oint (H-z)^{-1} dz, trapezoid on the circle:
        //   -(R/n) sum_m e^{i theta_m} (H - z_m)^{-1}
        Mat4 acc = Mat4::Zero();
        for (int m = 0; m < contour.nodes; ++m) {
            const double theta = 2 * kPi * m / contour.nodes;
            const cplx phase = std::polar(1.0, theta);
            const cplx z = center + contour.radius * phase;
            Mat4 shifted = ham - z * Mat4::Identity();
            Eigen::PartialPivLU<Mat4> lu(shifted);
            Mat4 inv = lu.solve(Mat4::Identity());
            if (!inv.allFinite() || inv.norm() > 1e12)
                throw std::runtime_error("riesz_projector: resolvent condition overflow");
            acc += phase * inv;
        }
        field.samples[i] = -(contour.radius / contour.nodes) * acc;
    }
    // Trace of the enclosed projector, rounded; 0 and 4 are legal here
    // (contour around nothing / around everything).
    double tr = field.samples.empty() ? 0.0 : field.samples[0].trace().real();
    field.rank = static_cast<int>(std::lround(tr));
    return field;
}

namespace {

std::array<bool, 8> involution_flips(const Grid& grid, InvolutionKind kind) {
    const int d = grid.dim();
    std::array<bool, 8> flips{};
    switch (kind) {
        case InvolutionKind::TauTorus:
            if (grid.kind() != GridKind::Torus)
                throw std::invalid_argument("tau-torus involution needs a torus grid");
            for (int a = 0; a < d; ++a) flips[a] = true;
            return flips;
        case InvolutionKind::TauSphere:
            // chart image of tau is kappa -> -kappa
            for (int a = 0; a < d; ++a) flips[a] = true;
            return flips;
        case InvolutionKind::VarpiS4:
            if (d != 4)
                throw std::invalid_argument("varpi involution needs a 4D chart grid");
            flips[0] = true;
            flips[2] = true;
            return flips;
        case InvolutionKind::Antipodal:
            throw std::invalid_argument("antipodal involution has no closed grids here");
    }
    throw std::invalid_argument("unknown involution");
}

}  // namespace

RealStructureReport verify_real_structure(const ProjectorField& field,
                                          InvolutionKind involution, const Mat4& j) {
    const Grid& grid = field.grid;
    std::array<bool, 8> flips = involution_flips(grid, involution);
    RealStructureReport report;
    const std::int64_t total = grid.total_points();
    int idx[8];
    for (std::int64_t i = 0; i < total; ++i) {
        grid.indices(i, std::span<int>(idx, grid.dim()));
        std::int64_t partner = grid.involution_partner(
            std::span<const int>(idx, grid.dim()),
            std::span<const bool>(flips.data(), grid.dim()));
        double dev = frob_norm(j * field.samples[i].conjugate() * j.adjoint() -
                               field.samples[partner]);
        if (dev > report.max_deviation) {
            report.max_deviation = dev;
            report.argmax_flat = i;
        }
    }
    return report;
}

HealthReport projector_health(const ProjectorField& field) {
    HealthReport report;
    report.trace_min = std::numeric_limits<double>::infinity();
    report.trace_max = -report.trace_min;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(field.samples.size()); ++i) {
        const Mat4& p = field.samples[i];
        double idem = frob_norm(p * p - p);
        double herm = frob_norm(p - p.adjoint());
        cplx tr = p.trace();
        if (idem > report.max_idempotency_defect) {
            report.max_idempotency_defect = idem;
            report.worst_flat = i;
        }
        report.max_hermiticity_defect = std::max(report.max_hermiticity_defect, herm);
        report.trace_min = std::min(report.trace_min, tr.real());
        report.trace_max = std::max(report.trace_max, tr.real());
        report.max_trace_imag = std::max(report.max_trace_imag, std::abs(tr.imag()));
    }
    return report;
}

namespace {

nlohmann::json grid_to_json(const Grid& grid) {
    nlohmann::json j;
    switch (grid.kind()) {
        case GridKind::Torus:
            j["kind"] = "torus";
            j["d"] = grid.dim();
            j["n"] = grid.axis(0).nodes.size();
            j["offset"] = grid.torus_offset();
            break;
        case GridKind::TruncatedChart:
            j["kind"] = "chart";
            j["d"] = grid.dim();
            j["n"] = grid.axis(0).nodes.size();
            j["box"] = grid.chart_half_width();
            break;
        case GridKind::S3Angles:
            j["kind"] = "s3-angles";
            j["n_theta"] = grid.axis(0).nodes.size();
            j["n_phi"] = grid.axis(1).nodes.size();
            j["n_psi"] = grid.axis(2).nodes.size();
            break;
    }
    return j;
}

Grid grid_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind");
    if (kind == "torus")
        return Grid::torus(j.at("d"), j.at("n"), j.value("offset", false));
    if (kind == "chart")
        return Grid::truncated_chart(j.at("d"), j.at("box"), j.at("n"));
    if (kind == "s3-angles")
        return Grid::s3_angles(j.at("n_theta"), j.at("n_phi"), j.at("n_psi"));
    throw std::invalid_argument("unknown grid kind in JSON: " + kind);
}

}  // namespace

std::string export_field_json(const ProjectorField& field) {
    nlohmann::json j;
    j["grid"] = grid_to_json(field.grid);
    j["rank"] = field.rank;
    j["chart_tag"] = field.chart_tag;
    nlohmann::json samples = nlohmann::json::array();
    for (const Mat4& m : field.samples) {
        nlohmann::json entry = nlohmann::json::array();
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                entry.push_back({m(r, c).real(), m(r, c).imag()});
        samples.push_back(std::move(entry));
    }
    j["samples"] = std::move(samples);
    return j.dump();
}

ProjectorField import_field_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ProjectorField field{grid_from_json(j.at("grid")), {}, j.at("rank"),
                         j.at("chart_tag")};
    const auto& samples = j.at("samples");
    if (static_cast<std::int64_t>(samples.size()) != field.grid.total_points())
        throw std::invalid_argument("field JSON: sample count does not match grid");
    field.samples.reserve(samples.size());
    for (const auto& entry : samples) {
        Mat4 m;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                const auto& pair = entry.at(4 * r + c);
                m(r, c) = cplx(pair.at(0), pair.at(1));
            }
        field.samples.push_back(m);
    }
    return field;
}

double max_field_distance(const ProjectorField& a, const ProjectorField& b) {
    if (a.samples.size() != b.samples.size())
        throw std::invalid_argument("max_field_distance: size mismatch");
    double worst = 0;
    for (size_t i = 0; i < a.samples.size(); ++i)
        worst = std::max(worst, frob_norm(a.samples[i] - b.samples[i]));
    return worst;
}

}  // namespace rb
